#include "sympick/cli.hpp"

int main(int argc, char** argv) { return sympick::cli::run(argc, argv); }
