#ifndef DIMFREE_TOOLS_EXPERIMENTS_HPP
#define DIMFREE_TOOLS_EXPERIMENTS_HPP

#include <functional>
#include <string>
#include <vector>

#include "runner.hpp"

namespace dimfree::cli {

struct ExperimentEntry {
    std::string name;
    std::function<void(const Config&)> validate;
    std::function<ExperimentOutput(const Config&, unsigned)> run;
};

const std::vector<ExperimentEntry>& experiment_table();
const ExperimentEntry* find_experiment(const std::string& name);

} // namespace dimfree::cli

#endif
