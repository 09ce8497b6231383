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

#include "ness_battery/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>

#include "ness_battery/error.hpp"

namespace ness_battery {

namespace {

void require_engine_model(const Liouvillian& L) {
    if (!(L.params.lambda > 0.0)) {
        throw Error(ErrorCode::InvalidModel, "the engine needs lambda > 0 (S and A are degenerate otherwise)");
    }
}

double require_positive_tau(double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw Error(ErrorCode::InvalidArgument, "cycle duration tau must be positive and finite");
    }
    return tau;
}

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        });
    }
}

double r_gap(const Populations& p) { return p.r_A - p.r_S; }

} // namespace

CycleMap::CycleMap(const Liouvillian& L, double tau) : L_(&L), charge_(L, require_positive_tau(tau)) {
    require_engine_model(L);
}

CycleMap::Step CycleMap::advance(const DensityMatrix& rho) const {
    DensityMatrix charged = charge_.apply(rho);
    ErgotropyResult discharge = ergotropy(charged, L_->hamiltonian);
    return {std::move(charged), std::move(discharge)};
}

CycleOutcome run_cycle(const Liouvillian& L, const DensityMatrix& rho_start, double tau, int heat_steps) {
    const CycleMap map(L, tau);
    CycleMap::Step step = map.advance(rho_start);
    const HeatIntegral heat = integrate_heats(L, rho_start, tau, heat_steps);

    CycleRecord rec;
    rec.tau = tau;
    rec.work_extracted = step.discharge.ergotropy;
    rec.heat_hot = heat.hot;
    rec.heat_cold = heat.cold;
    rec.efficiency = heat.hot > 0.0 ? rec.work_extracted / heat.hot : 0.0;
    rec.power = rec.work_extracted / tau;
    rec.populations_start = rho_start.populations();
    rec.populations_end = step.charged.populations();
    rec.ordering_satisfied = rec.populations_end.inverted_ordering();
    return {std::move(step.discharge.passive_state), rec};
}

OSSResult find_oss(const Liouvillian& L, double tau, const OssOptions& options) {
    if (!(options.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "find_oss: tol must be positive");
    const CycleMap map(L, tau);

    DensityMatrix state = ergotropy(solve_ness(L), L.hamiltonian).passive_state;
    OSSResult result{state, 0, {}, std::nullopt, {}};
    bool converged = false;
    for (long cycle = 1; cycle <= options.max_cycles; ++cycle) {
        CycleMap::Step step = map.advance(state);
        if (options.keep_work_trace) result.work_trace.push_back(step.discharge.ergotropy);
        const double moved = trace_distance(step.discharge.passive_state.matrix(), state.matrix());
        state = std::move(step.discharge.passive_state);
        if (moved < options.tol) {
            result.cycles_to_converge = cycle;
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw Error(ErrorCode::NoConvergence,
                    "operational steady state not reached within " + std::to_string(options.max_cycles) + " cycles");
    }
    result.state_at_cycle_start = state;
    result.record = run_cycle(L, state, tau, options.heat_steps).record;
    if (options.estimate_tau_min) {
        try {
            result.tau_min_estimate = estimate_tau_min(L, state);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NotFound) throw;
        }
    }
    return result;
}

ShortCycleAnalytics short_cycle_analytics(const BathRates& rates, const ModelParams& params) {
    const double gradient = rates.gradient();
    if (!(gradient > 0.0)) {
        throw Error(ErrorCode::NonPositiveGradient, "short-cycle analytics need G+_A G-_S > G-_A G+_S");
    }
    const double w = params.omega0;
    const double l = params.lambda;
    const double up = rates.gamma_plus_A + rates.gamma_plus_S;
    const double down = rates.gamma_minus_A + rates.gamma_minus_S;
    const double total = up + down;

    ShortCycleAnalytics a;
    a.K = gradient / (total * total);
    a.ergotropy_rate = 4.0 * l * a.K * (down - up);
    a.heat_rate = 2.0 * a.K * ((w - l) * up + (w + l) * down);
    const double ratio = up / down;
    const double x = l / w;
    a.eta_tau = 2.0 * x * (1.0 - ratio) / (1.0 + x + ratio * (1.0 - x));
    a.eta_plateau = 2.0 * l / (w + l);
    a.power_general = 4.0 * l * gradient / down;
    a.power_strong_cold = 4.0 * l * rates.gamma_plus_A;
    if (const auto* optics = std::get_if<OpticsProvenance>(&rates.provenance)) {
        a.power_optics = 2.0 * optics->p * l;
    }
    return a;
}

double estimate_tau_min(const Liouvillian& L, const DensityMatrix& rho_oss, double tol) {
    const double total = L.rates.total();
    if (!(L.rates.gradient() > 0.0) || !(total > 0.0)) {
        throw Error(ErrorCode::NotFound, "no population inversion without a positive gradient");
    }
    const Populations start = rho_oss.populations();
    const double horizon = 100.0 / total;
    const auto gap_at = [&](double t) { return r_gap(rate_equation_propagate(start, L.rates, t)); };

    // Log-spaced scan for the first positive gap, then bisection.
    constexpr int kScanPoints = 400;
    double lo = 0.0;
    double hi = -1.0;
    for (int k = 0; k < kScanPoints; ++k) {
        const double t = horizon * std::pow(10.0, -9.0 * (1.0 - static_cast<double>(k) / (kScanPoints - 1)));
        if (gap_at(t) > 0.0) {
            hi = t;
            break;
        }
        lo = t;
    }
    if (hi < 0.0) {
        throw Error(ErrorCode::NotFound, "r_A never exceeds r_S within 100 / sum(rates)");
    }
    while (hi - lo > tol * hi) {
        const double mid = 0.5 * (lo + hi);
        (gap_at(mid) > 0.0 ? hi : lo) = mid;
    }
    if (!(r_gap(propagate(L, rho_oss, hi).populations()) > 0.0)) {
        throw Error(ErrorCode::NotFound, "full propagation does not confirm the rate-equation crossing");
    }
    return hi;
}

std::vector<TauSweepRow> sweep_tau(const Liouvillian& L, const std::vector<double>& taus, const OssOptions& options,
                                   unsigned threads) {
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (!(taus[i] > 0.0) || (i > 0 && !(taus[i] > taus[i - 1]))) {
            throw Error(ErrorCode::InvalidArgument, "tau grid must be positive and strictly ascending");
        }
    }
    std::vector<TauSweepRow> rows(taus.size());
    parallel_for(taus.size(), threads, [&](std::size_t i) {
        TauSweepRow& row = rows[i];
        row.tau = taus[i];
        try {
            const OSSResult oss = find_oss(L, taus[i], options);
            row.work = oss.record.work_extracted;
            row.heat_hot = oss.record.heat_hot;
            row.efficiency = oss.record.efficiency;
            row.power = oss.record.power;
            row.cycles_to_converge = oss.cycles_to_converge;
        } catch (const Error& e) {
            row.error = e.what();
        }
    });
    return rows;
}

std::vector<TemperatureSweepRow> sweep_temperatures(const std::vector<double>& beta_S_grid,
                                                    const std::vector<double>& beta_A_grid, double gamma0,
                                                    const ModelParams& params, unsigned threads) {
    const std::size_t n_A = beta_A_grid.size();
    std::vector<TemperatureSweepRow> rows(beta_S_grid.size() * n_A);
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        TemperatureSweepRow& row = rows[i];
        row.beta_S = beta_S_grid[i / n_A];
        row.beta_A = beta_A_grid[i % n_A];
        try {
            if (!(row.beta_S > 0.0) || !(row.beta_A > 0.0)) {
                throw Error(ErrorCode::NonPositiveTemperature, "inverse temperature must be positive");
            }
            const BathRates rates =
                rates_from_temperatures(gamma0, gamma0, 1.0 / row.beta_A, 1.0 / row.beta_S, params.omega0);
            const Liouvillian L = build_liouvillian(params, rates);
            const DensityMatrix ness = solve_ness(L);
            row.populations = ness.populations();
            row.ergotropy = ergotropy(ness, L.hamiltonian).ergotropy;
        } catch (const Error& e) {
            row.error = e.what();
        }
    });
    return rows;
}

std::vector<TraceSample> trace_cycles(const Liouvillian& L, const DensityMatrix& rho_start, double idle,
                                      double tau, int cycles, int samples_per_stroke) {
    require_positive_tau(tau);
    if (!(idle >= 0.0)) throw Error(ErrorCode::NegativeTime, "idle time must be non-negative");
    if (samples_per_stroke < 1 || cycles < 0) {
        throw Error(ErrorCode::InvalidArgument, "trace needs samples_per_stroke >= 1 and cycles >= 0");
    }
    std::vector<TraceSample> out;
    const auto emit = [&](double t, int cycle, const DensityMatrix& rho) {
        out.push_back({t, cycle, rho.populations(), ergotropy(rho, L.hamiltonian).ergotropy,
                       heat_current(L, rho, Channel::A)});
    };

    DensityMatrix rho = rho_start;
    emit(0.0, 0, rho);
    if (idle > 0.0) {
        const Propagator step(L, idle / samples_per_stroke);
        for (int k = 1; k <= samples_per_stroke; ++k) {
            rho = step.apply(rho);
            emit(idle * k / samples_per_stroke, 0, rho);
        }
    }
    const Propagator step(L, tau / samples_per_stroke);
    double t0 = idle;
    for (int c = 1; c <= cycles; ++c) {
        rho = ergotropy(rho, L.hamiltonian).passive_state;
        emit(t0, c, rho);
        for (int k = 1; k <= samples_per_stroke; ++k) {
            rho = step.apply(rho);
            emit(t0 + tau * k / samples_per_stroke, c, rho);
        }
        t0 += tau;
    }
    return out;
}

} // namespace ness_battery
