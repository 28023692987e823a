#pragma once

#include "nadc/adc_core.hpp"

namespace nadc {

// Brute-force reference for simulate(): checks the thresholds at every
// step of a dt_fine grid and takes the first step at which a threshold is
// met as the crossing time (no refinement). Only defined for noise-free
// configurations; requires dt_fine <= cfg.dt / 10.
//
// Throws UnsupportedError when cfg.noise_sigma > 0 and ParameterError for
// a dt_fine that is too coarse.
SimulationTrace simulate_dense(const Waveform &w, const AdcConfig &cfg,
        double dt_fine);

} // namespace nadc
