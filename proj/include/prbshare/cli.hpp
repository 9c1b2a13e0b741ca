#pragma once

#include <string>
#include <vector>

namespace prbshare {

/// Entry point behind the prbshare binary. Returns the process exit code:
/// 0 on success, 2 for usage/validation problems, 1 for runtime failures.
int run_cli(const std::vector<std::string>& args);

/// Bundled model grids reproducing the published hyperparameter table for
/// the in-scope model kinds (these also ship as data/grids/*.json).
const char* default_grid_json();        // six specs, incl. the MLP
const char* statistical_grid_json();    // the five statistical specs

}  // namespace prbshare
