#include "cli_app.hpp"

int main(int argc, char** argv) { return bwave::cli::main_entry(argc, argv); }
