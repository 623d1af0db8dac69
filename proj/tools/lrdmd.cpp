#include "lrdmd/cli.hpp"

int main(int argc, char** argv) { return lrdmd::cli::run(argc, argv); }
