#include "sentivol/cli.hpp"

int main(int argc, char** argv) {
    return sentivol::cli::main_entry(argc, argv);
}
