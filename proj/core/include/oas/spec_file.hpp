#pragma once

#include <string>

#include "oas/experiment.hpp"

namespace oas {

// Experiment description files are flat `key = value` text. Blank lines and
// lines starting with '#' are ignored; lists are comma separated. The
// `scenario` key (if present) selects the defaults every other key
// overrides. Unknown or repeated keys are errors.
//
//   scenario        fig1_decoupled | fig2_alg1 | fig3_alg2 | custom
//   engine          alg1 | alg2 | decoupled_iid | decoupled_orthogonal
//   delta           sparsity in [0, 1]
//   sigma_t2        slab variance
//   sigma2          noise variance over the full sensing duration
//   n               samples per trial
//   m_list          subframe counts, e.g. 1, 4, 8
//   rho_list        inverse loads, e.g. 1, 2, 4
//   d_th_db         threshold in power dB
//   adaptation      topk | threshold
//   trials          Monte Carlo trials per (rho, m)
//   master_seed     unsigned 64-bit integer
//   baselines       any of lasso, mmse_bound, nonadaptive (or none)
//   distortion      derivative | variance
//   mf_interference second_moment | slab_variance
//   record_timing   true | false
//   workers         worker threads, 0 for automatic
ExperimentSpec parse_spec_text(const std::string& text);
ExperimentSpec load_spec_file(const std::string& path);

/// Applies one `key = value` assignment to spec. Throws ConfigError.
void apply_spec_key(ExperimentSpec& spec, const std::string& key, const std::string& value);

}  // namespace oas
