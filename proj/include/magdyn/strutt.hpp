#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "magdyn/errors.hpp"
#include "magdyn/mat.hpp"
#include "magdyn/pulse.hpp"
#include "magdyn/transfer.hpp"

namespace magdyn {

enum class StabilityClass : std::uint8_t { Stable, Threshold, Unstable, Diverged };

inline const char* to_string(StabilityClass c) {
    switch (c) {
        case StabilityClass::Stable: return "stable";
        case StabilityClass::Threshold: return "threshold";
        case StabilityClass::Unstable: return "unstable";
        case StabilityClass::Diverged: return "diverged";
    }
    return "?";
}

/// |sigma| against 2 with a tolerance band around the threshold.
inline StabilityClass classify(double sigma, double eps_thr) {
    const double a = std::fabs(sigma);
    if (std::fabs(a - 2.0) <= eps_thr) return StabilityClass::Threshold;
    return a < 2.0 ? StabilityClass::Stable : StabilityClass::Unstable;
}

struct ScanGrid {
    double beta1_min = -15.0, beta1_max = 15.0;
    double beta2_min = -15.0, beta2_max = 15.0;
    int n1 = 601, n2 = 601;
    double omega1 = 2.0 * 3.141592653589793;
    double omega2 = 4.0 * 3.141592653589793;
    double beta0 = 0.0;
    double t0 = 0.0, t1 = 1.0;

    bool valid() const {
        return n1 >= 2 && n2 >= 2 && beta1_min < beta1_max && beta2_min < beta2_max &&
               t1 > t0;
    }
    double beta1_at(int i) const {
        return beta1_min + (beta1_max - beta1_min) * i / (n1 - 1);
    }
    double beta2_at(int j) const {
        return beta2_min + (beta2_max - beta2_min) * j / (n2 - 1);
    }
};

struct ScanOptions {
    double step = 1e-3;          // per-cell ODE step; refinement runs finer
    double eps_thr = 1e-6;
    double overflow_guard = 1e12;
    int workers = 0;             // 0 = hardware concurrency
};

struct CellResult {
    double sigma = 2.0;
    double h11 = 1.0, h12 = 0.0, h21 = 0.0, h22 = 1.0;
    StabilityClass cls = StabilityClass::Threshold;
};

struct StruttMap {
    ScanGrid grid;
    ScanOptions opts;
    std::vector<CellResult> cells;  // row-major, index i*n2 + j

    const CellResult& at(int i, int j) const {
        return cells[static_cast<std::size_t>(i) * static_cast<std::size_t>(grid.n2) + static_cast<std::size_t>(j)];
    }
};

namespace detail {

/// Transfer matrix of one biharmonic cell; hand-rolled loop, this is the
/// scan's hot path.
inline bool cell_transfer(double beta0, double b1, double b2, double w1, double w2,
                          double t0, double t1, double step, double guard, Mat2& h) {
    const std::int64_t n = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::llround((t1 - t0) / step)));
    const double dt = (t1 - t0) / static_cast<double>(n);
    h = Mat2::identity();
    auto beta = [&](double t) {
        return beta0 + b1 * std::sin(w1 * t) + b2 * std::sin(w2 * t);
    };
    for (std::int64_t i = 0; i < n; ++i) {
        const double t = t0 + static_cast<double>(i) * dt;
        const double ba = beta(t), bm = beta(t + 0.5 * dt), bb = beta(t + dt);
        rk4_transfer_step(h, ba * ba, bm * bm, bb * bb, dt);
        if (guard_tripped(h, guard)) return false;
    }
    return true;
}

} // namespace detail

/// Scan the (beta1, beta2) grid. Cells are independent and written by index,
/// so the result is identical for any worker count.
inline StruttMap scan_strutt(const ScanGrid& grid, const ScanOptions& opts = {}) {
    if (!grid.valid()) throw std::invalid_argument("scan_strutt: invalid grid");
    StruttMap map;
    map.grid = grid;
    map.opts = opts;
    map.cells.assign(static_cast<std::size_t>(grid.n1) * static_cast<std::size_t>(grid.n2), {});

    auto run_row = [&](int i) {
        const double b1 = grid.beta1_at(i);
        for (int j = 0; j < grid.n2; ++j) {
            const double b2 = grid.beta2_at(j);
            CellResult& cell =
                map.cells[static_cast<std::size_t>(i) * static_cast<std::size_t>(grid.n2) + static_cast<std::size_t>(j)];
            Mat2 h;
            const bool ok = detail::cell_transfer(grid.beta0, b1, b2, grid.omega1,
                                                  grid.omega2, grid.t0, grid.t1,
                                                  opts.step, opts.overflow_guard, h);
            if (!ok) {
                // saturated divergence keeps the map complete
                const double sat = (h.trace() >= 0.0 || !std::isfinite(h.trace()))
                                       ? opts.overflow_guard
                                       : -opts.overflow_guard;
                cell.sigma = sat;
                const double clamp = opts.overflow_guard;
                cell.h11 = std::clamp(h.h11, -clamp, clamp);
                cell.h12 = std::clamp(h.h12, -clamp, clamp);
                cell.h21 = std::clamp(h.h21, -clamp, clamp);
                cell.h22 = std::clamp(h.h22, -clamp, clamp);
                cell.cls = StabilityClass::Diverged;
                continue;
            }
            cell.sigma = h.trace();
            cell.h11 = h.h11;
            cell.h12 = h.h12;
            cell.h21 = h.h21;
            cell.h22 = h.h22;
            cell.cls = classify(cell.sigma, opts.eps_thr);
        }
    };

    int workers = opts.workers > 0
                      ? opts.workers
                      : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    if (workers == 1) {
        for (int i = 0; i < grid.n1; ++i) run_row(i);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < grid.n1; i = next.fetch_add(1))
                    run_row(i);
            });
        for (auto& th : pool) th.join();
    }
    return map;
}

struct SqueezePoint {
    double beta1 = 0.0, beta2 = 0.0;
    double lambda = 0.0;   // h11 at the refined point
    double residual = 0.0; // |h12| + |h21|
};

struct FreeEvolutionKind {
    enum class Kind { Quickened, Delayed, Inverted, None } kind = Kind::None;
    double tau = 0.0;
};

inline const char* to_string(FreeEvolutionKind::Kind k) {
    switch (k) {
        case FreeEvolutionKind::Kind::Quickened: return "quickened";
        case FreeEvolutionKind::Kind::Delayed: return "delayed";
        case FreeEvolutionKind::Kind::Inverted: return "inverted";
        case FreeEvolutionKind::Kind::None: return "none";
    }
    return "?";
}

/// Match a threshold-band matrix against the shear structure +-[[1,tau],[0,1]].
/// Sigma ~ +2: tau = h12, quickened when tau exceeds the wall-clock span,
/// delayed for 0 < tau <= span. Sigma ~ -2 with h12 > 0: inverted free
/// evolution, tau = -2 h12 (the shear realised after doubling the period).
inline FreeEvolutionKind threshold_kind(const TransferMatrix& m, double t_span,
                                        double eps_thr) {
    if (std::fabs(std::fabs(m.sigma) - 2.0) > eps_thr)
        throw NotOnThreshold("threshold_kind: |sigma| not within eps of 2");
    FreeEvolutionKind out;
    if (std::fabs(m.h.h21) > eps_thr) return out;  // off-diagonal structure absent
    if (m.sigma > 0.0) {
        const double tau = m.h.h12;
        out.tau = tau;
        if (tau > t_span)
            out.kind = FreeEvolutionKind::Kind::Quickened;
        else if (tau > 0.0)
            out.kind = FreeEvolutionKind::Kind::Delayed;
        return out;
    }
    out.tau = -2.0 * m.h.h12;
    if (m.h.h12 > 0.0) out.kind = FreeEvolutionKind::Kind::Inverted;
    return out;
}

namespace detail {

inline Mat2 grid_transfer(const ScanGrid& g, double b1, double b2, double step,
                          double guard) {
    Mat2 h;
    if (!cell_transfer(g.beta0, b1, b2, g.omega1, g.omega2, g.t0, g.t1, step, guard, h))
        throw NonFiniteState(g.t1, "refinement integration exceeded overflow guard");
    return h;
}

} // namespace detail

/// Track the h11 = lambda_target contour through the unstable cells and rank
/// the crossings by the off-diagonal impurity |h12| + |h21|.
///
/// Note the scan windows used here keep the coefficient beta^2 symmetric
/// about the interval centre, which forces h11 = h22 = sigma/2; a refined
/// point therefore carries the irreducible impurity floor
/// 2*sqrt(h11^2 - 1) (AM-GM on |h12| |h21| = h11^2 - 1). residual_tol below
/// that floor yields EmptyResult.
inline std::vector<SqueezePoint> find_squeeze_points(const StruttMap& map,
                                                     double lambda_target,
                                                     double residual_tol,
                                                     double refine_step = 2.5e-4,
                                                     int max_iter = 60) {
    const ScanGrid& g = map.grid;
    std::vector<SqueezePoint> out;

    auto considered = [&](const CellResult& c) {
        return c.cls == StabilityClass::Unstable || c.cls == StabilityClass::Threshold;
    };
    auto refine_edge = [&](double b1a, double b2a, double b1b, double b2b) {
        // bisection for h11 = lambda_target along the grid edge
        auto f = [&](double s) {
            const Mat2 h = detail::grid_transfer(g, b1a + s * (b1b - b1a),
                                                 b2a + s * (b2b - b2a), refine_step,
                                                 map.opts.overflow_guard);
            return h;
        };
        double lo = 0.0, hi = 1.0;
        Mat2 hlo = f(lo), hhi = f(hi);
        double flo = hlo.h11 - lambda_target, fhi = hhi.h11 - lambda_target;
        if (flo == 0.0) hi = lo;
        else if (fhi == 0.0) lo = hi;
        else if (flo * fhi > 0.0) return; // no crossing at refined accuracy
        Mat2 h = flo == 0.0 ? hlo : hhi;
        for (int it = 0; it < max_iter && hi - lo > 1e-12; ++it) {
            const double mid = 0.5 * (lo + hi);
            h = f(mid);
            const double fm = h.h11 - lambda_target;
            if (fm == 0.0) { lo = hi = mid; break; }
            if (flo * fm < 0.0) { hi = mid; fhi = fm; }
            else { lo = mid; flo = fm; }
        }
        const double s = 0.5 * (lo + hi);
        SqueezePoint p;
        p.beta1 = b1a + s * (b1b - b1a);
        p.beta2 = b2a + s * (b2b - b2a);
        const Mat2 hf = detail::grid_transfer(g, p.beta1, p.beta2, refine_step,
                                              map.opts.overflow_guard);
        p.lambda = hf.h11;
        p.residual = std::fabs(hf.h12) + std::fabs(hf.h21);
        if (std::fabs(p.lambda - lambda_target) <= 1e-3 && p.residual <= residual_tol)
            out.push_back(p);
    };

    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            const CellResult& c = map.at(i, j);
            if (!considered(c)) continue;
            const double f0 = c.h11 - lambda_target;
            if (i + 1 < g.n1) {
                const CellResult& r = map.at(i + 1, j);
                if (considered(r) && f0 * (r.h11 - lambda_target) <= 0.0 &&
                    (f0 != 0.0 || r.h11 != c.h11))
                    refine_edge(g.beta1_at(i), g.beta2_at(j), g.beta1_at(i + 1),
                                g.beta2_at(j));
            }
            if (j + 1 < g.n2) {
                const CellResult& u = map.at(i, j + 1);
                if (considered(u) && f0 * (u.h11 - lambda_target) <= 0.0 &&
                    (f0 != 0.0 || u.h11 != c.h11))
                    refine_edge(g.beta1_at(i), g.beta2_at(j), g.beta1_at(i),
                                g.beta2_at(j + 1));
            }
        }
    }

    std::sort(out.begin(), out.end(), [](const SqueezePoint& a, const SqueezePoint& b) {
        if (a.residual != b.residual) return a.residual < b.residual;
        if (a.beta1 != b.beta1) return a.beta1 < b.beta1;
        return a.beta2 < b.beta2;
    });
    // drop near-duplicates from shared cell corners
    const double cell =
        std::max((g.beta1_max - g.beta1_min) / (g.n1 - 1), (g.beta2_max - g.beta2_min) / (g.n2 - 1));
    std::vector<SqueezePoint> dedup;
    for (const auto& p : out) {
        bool close = false;
        for (const auto& q : dedup)
            if (std::fabs(p.beta1 - q.beta1) < 0.75 * cell &&
                std::fabs(p.beta2 - q.beta2) < 0.75 * cell) {
                close = true;
                break;
            }
        if (!close) dedup.push_back(p);
    }
    if (dedup.empty())
        throw EmptyResult("find_squeeze_points: no contour crossing satisfies the filters");
    return dedup;
}

/// Cells straddling the |Sigma| = 2 belt (sign change of |Sigma|-2 against
/// the right or upper neighbour).
inline std::vector<std::pair<int, int>> separatrix_cells(const StruttMap& map) {
    std::vector<std::pair<int, int>> out;
    const ScanGrid& g = map.grid;
    auto f = [&](int i, int j) { return std::fabs(map.at(i, j).sigma) - 2.0; };
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            const double v = f(i, j);
            const bool right = i + 1 < g.n1 && v * f(i + 1, j) < 0.0;
            const bool up = j + 1 < g.n2 && v * f(i, j + 1) < 0.0;
            if (right || up || map.at(i, j).cls == StabilityClass::Threshold)
                out.emplace_back(i, j);
        }
    return out;
}

} // namespace magdyn
