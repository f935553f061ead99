#ifndef MWK_EXPERIMENT_HPP
#define MWK_EXPERIMENT_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mwk/cluster.hpp"
#include "mwk/minkowski.hpp"
#include "mwk/parallel.hpp"

namespace mwk {

/// One command-line invocation, fully resolved. Serialized into every JSON result.
struct ExperimentConfig {
    std::string command;  // cluster | select | synth | eval | audit | bench

    std::string input;
    std::string output;
    std::string label_column = "label";
    bool normalize = true;

    std::size_t k = 0;
    std::size_t r = 0;
    double p = 2.0;
    std::string grid;             // empty: fine for select/audit with fs, coarse for sfs and bench
    std::string init = "mwkpp";   // cluster: mwkpp | kmeanspp | random | kmeans
    std::string method = "fs";    // select: fs | sfs
    std::size_t restarts = 25;
    std::size_t outer = 25;
    CenterMode mode = CenterMode::exact;
    int max_iter = 100;
    Regularization regularization = Regularization::always;
    std::uint64_t seed = 0;
    unsigned threads = default_threads();
    std::string emit = "json";    // json | csv

    // synth
    std::string config_name;
    std::size_t count = 1;

    // eval
    std::string assignments;
    std::string selected;

    // audit
    std::string stack;
    std::string save_stack;
    bool theorem = false;
    double gamma = 0.0;
    double alpha = 1.0;
    std::optional<double> capital_a;
    std::optional<double> capital_l;
    std::string ratios;
    std::size_t m = 0;

    // bench
    std::string suite = "table2";  // table2 | table3 | both
    std::vector<std::string> configs;
    std::size_t datasets = 10;

    void validate() const;
};

/// Executes the command. Results go to files or `out`; a failure prints a single
/// "<category>: <detail>" line on `err` and returns a nonzero status.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

}  // namespace mwk

#endif
