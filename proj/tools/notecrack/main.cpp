#include "commands.hpp"

int main(int argc, char** argv) { return notecrack::cli::run_cli(argc, argv); }
