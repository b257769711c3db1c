#include "slglue/cli.hpp"

int main(int argc, char** argv) { return slglue::run_cli(argc, argv); }
