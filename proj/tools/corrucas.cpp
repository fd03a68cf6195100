#include "corrucas/cli.hpp"

int main(int argc, char** argv) { return corrucas::cli::run(argc, argv); }
