#include "commands.hpp"

int main(int argc, char** argv) {
    return metricstats::cli::run_cli(argc, argv);
}
