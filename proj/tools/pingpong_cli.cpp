#include "pingpong/cli.hpp"

int main(int argc, char** argv) { return pingpong::cli::run(argc, argv); }
