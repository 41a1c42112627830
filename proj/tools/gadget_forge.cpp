#include "gadget_forge/cli.hpp"

int main(int argc, char** argv) { return gadget_forge::cli::run(argc, argv); }
