#include "cli.hpp"

int main(int argc, char** argv) { return axbench::cli::main(argc, argv); }
