#include "perex/cli.hpp"

int main(int argc, char** argv) { return perex::cli::run(argc, argv); }
