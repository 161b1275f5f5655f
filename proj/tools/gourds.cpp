#include "gourds/cli.hpp"

int main(int argc, char** argv) { return gourds::cli::run(argc, argv); }
