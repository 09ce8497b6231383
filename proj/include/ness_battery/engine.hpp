// Copyright 2026 The ness-battery Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// engine.hpp - the two-stroke cycle: charge for tau under the Liouvillian,
// then discharge instantaneously with the ergotropy-optimal unitary.
//
// Heat sign convention: positive = absorbed by the battery. "hot" always
// refers to channel A (the T_A source) and "cold" to channel S.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ness_battery/dynamics.hpp"
#include "ness_battery/ergotropy.hpp"
#include "ness_battery/model.hpp"

namespace ness_battery {

struct CycleRecord {
    double tau = 0.0;
    double work_extracted = 0.0;
    double heat_hot = 0.0;
    double heat_cold = 0.0;
    double efficiency = 0.0; // work / heat_hot, 0 when heat_hot <= 0
    double power = 0.0;      // work / tau
    Populations populations_start; // cycle start (post-discharge)
    Populations populations_end;   // end of the charging stroke, before discharge
    bool ordering_satisfied = false; // r_gg > r_A > r_S > r_ee at stroke end
};

struct CycleOutcome {
    DensityMatrix next_state;
    CycleRecord record;
};

// One charge/discharge cycle with full heat accounting.
CycleOutcome run_cycle(const Liouvillian& L, const DensityMatrix& rho_start, double tau, int heat_steps = 512);

// The cycle map without heat bookkeeping, with exp(L tau) precomputed.
class CycleMap {
public:
    CycleMap(const Liouvillian& L, double tau);

    struct Step {
        DensityMatrix charged;
        ErgotropyResult discharge;
    };

    Step advance(const DensityMatrix& rho) const;
    double tau() const noexcept { return charge_.time(); }

private:
    const Liouvillian* L_;
    Propagator charge_;
};

struct OssOptions {
    double tol = 1e-10;
    long max_cycles = 1'000'000;
    int heat_steps = 512;
    bool keep_work_trace = false;
    bool estimate_tau_min = false;
};

struct OSSResult {
    DensityMatrix state_at_cycle_start;
    long cycles_to_converge = 0;
    CycleRecord record;
    std::optional<double> tau_min_estimate;
    std::vector<double> work_trace; // per-cycle work from the NESS start, if requested
};

// Iterates the cycle map from the passive state of the NESS until two
// successive cycle-start states are within `tol` in trace distance.
// Throws NoConvergence after max_cycles.
OSSResult find_oss(const Liouvillian& L, double tau, const OssOptions& options = {});

struct ShortCycleAnalytics {
    double K = 0.0;
    double ergotropy_rate = 0.0; // E_tau / tau
    double heat_rate = 0.0;      // Q^A_tau / tau
    double eta_tau = 0.0;
    double eta_plateau = 0.0;    // 2 l / (w0 + l)
    double power_general = 0.0;  // 4 l (G+_A G-_S - G-_A G+_S) / (G-_A + G-_S)
    double power_strong_cold = 0.0; // 4 l G+_A
    std::optional<double> power_optics; // 2 p l
};

// First-order (tau * sum(G) << 1) ergotropy, heat and efficiency at the
// operational steady state. Throws NonPositiveGradient.
ShortCycleAnalytics short_cycle_analytics(const BathRates& rates, const ModelParams& params);

// Smallest charging time after which r_A > r_S when starting from rho_oss,
// found on the diagonal rate equations and confirmed with the full
// propagator. Throws NotFound if there is no crossing in (0, 100 / sum(G)].
double estimate_tau_min(const Liouvillian& L, const DensityMatrix& rho_oss, double tol = 1e-10);

struct TauSweepRow {
    double tau = 0.0;
    double work = 0.0;
    double heat_hot = 0.0;
    double efficiency = 0.0;
    double power = 0.0;
    long cycles_to_converge = 0;
    std::optional<std::string> error;
};

struct TemperatureSweepRow {
    double beta_S = 0.0;
    double beta_A = 0.0;
    Populations populations;
    double ergotropy = 0.0;
    std::optional<std::string> error;
};

// threads = 0 uses the hardware concurrency. Rows come back in input order.
std::vector<TauSweepRow> sweep_tau(const Liouvillian& L, const std::vector<double>& taus,
                                   const OssOptions& options = {}, unsigned threads = 1);

// NESS ergotropy over (beta_S, beta_A) with G0_A = G0_S = gamma0; beta_S is
// the outer loop. Temperatures are 1/beta in units of omega0.
std::vector<TemperatureSweepRow> sweep_temperatures(const std::vector<double>& beta_S_grid,
                                                    const std::vector<double>& beta_A_grid, double gamma0,
                                                    const ModelParams& params, unsigned threads = 1);

struct TraceSample {
    double t = 0.0;
    int cycle = 0; // 0 during the idle phase
    Populations populations;
    double ergotropy = 0.0;
    double heat_current_hot = 0.0;
};

// Idle evolution for `idle`, then `cycles` repetitions of (instantaneous
// discharge, charge for tau). Each discharge emits a pre- and a post-discharge
// sample at the same time.
std::vector<TraceSample> trace_cycles(const Liouvillian& L, const DensityMatrix& rho_start, double idle,
                                      double tau, int cycles, int samples_per_stroke);

} // namespace ness_battery
