#include "lexsev/cli.hpp"

int main(int argc, char** argv) { return lexsev::cli::run(argc, argv); }
