#include "rptsc/cli.hpp"

int main(int argc, char** argv) {
    return rptsc::cli::run(argc, argv);
}
