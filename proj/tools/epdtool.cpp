#include "epd/cli.hpp"

int main(int argc, char** argv) { return epd::run_cli(argc, argv); }
