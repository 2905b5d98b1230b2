#pragma once

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "qumi/errors.hpp"
#include "qumi/states.hpp"

// Deterministic global search for extrema of scalar objectives over one or
// two unit spheres. Coarse scan over the upper hemisphere (all objectives in
// this project are antipodally symmetric, which is spot-checked), then
// derivative-free local refinement in spherical angles.
namespace qumi::optimizer {

using states::Direction;

struct SearchConfig {
    int grid_polar = 32;
    int grid_azimuthal = 64;
    int refine_iterations = 200;
    double refine_tolerance = 1e-10;   // on objective change
    double bloch_zero_threshold = 1e-9;

    void check() const {
        if (grid_polar < 4 || grid_azimuthal < 4)
            throw Error(ErrorKind::ParamOutOfRange, "grid counts must be >= 4");
        if (refine_iterations < 1)
            throw Error(ErrorKind::ParamOutOfRange, "refine_iterations must be >= 1");
        if (refine_tolerance <= 0.0 || bloch_zero_threshold <= 0.0)
            throw Error(ErrorKind::ParamOutOfRange, "tolerances must be positive");
    }
};

enum class Mode { Maximize, Minimize };

struct DirectionResult {
    Direction direction;
    double value;
    std::vector<double> refinement_trace;  // objective after each refinement step
};

struct DirectionPairResult {
    Direction a;
    Direction b;
    double value;
    std::vector<double> refinement_trace;
};

inline Direction direction_from_spherical(double theta, double phi) {
    const double st = std::sin(theta);
    return Direction(st * std::cos(phi), st * std::sin(phi), std::cos(theta));
}

namespace detail {

inline constexpr double kTieEpsilon = 1e-14;
inline constexpr double kPi = 3.14159265358979323846;

struct GridPoint {
    double theta, phi;
    Direction dir;
};

inline std::vector<GridPoint> hemisphere_grid(const SearchConfig& cfg) {
    std::vector<GridPoint> pts;
    pts.reserve(static_cast<std::size_t>(cfg.grid_polar) * cfg.grid_azimuthal);
    const double dtheta = 0.5 * kPi / (cfg.grid_polar - 1);
    const double dphi = 2.0 * kPi / cfg.grid_azimuthal;
    for (int i = 0; i < cfg.grid_polar; ++i)
        for (int j = 0; j < cfg.grid_azimuthal; ++j) {
            const double theta = i * dtheta;
            const double phi = j * dphi;
            pts.push_back({theta, phi, direction_from_spherical(theta, phi)});
        }
    return pts;
}

// Nelder-Mead on D angle coordinates, maximizing `score`. Fixed simplex
// seeded one step along each coordinate from the start; iteration stops on
// the configured objective-change tolerance. Pushes the running best into
// `trace` after each iteration.
template <std::size_t D, typename Score>
std::pair<std::array<double, D>, double> nelder_mead_max(Score&& score,
                                                         const std::array<double, D>& start,
                                                         const std::array<double, D>& step,
                                                         int max_iterations, double tolerance,
                                                         std::vector<double>* trace,
                                                         double trace_sign) {
    struct Vertex {
        std::array<double, D> x;
        double g;  // negated score; minimized
    };
    auto eval = [&](const std::array<double, D>& x) { return -score(x); };

    std::array<Vertex, D + 1> simplex;
    simplex[0] = Vertex{start, eval(start)};
    for (std::size_t k = 0; k < D; ++k) {
        std::array<double, D> x = start;
        x[k] += step[k];
        simplex[k + 1] = Vertex{x, eval(x)};
    }

    auto order = [&] {
        std::stable_sort(simplex.begin(), simplex.end(),
                         [](const Vertex& l, const Vertex& r) { return l.g < r.g; });
    };
    order();

    for (int iter = 0; iter < max_iterations; ++iter) {
        if (simplex[D].g - simplex[0].g < tolerance) break;

        std::array<double, D> centroid{};
        for (std::size_t v = 0; v < D; ++v)
            for (std::size_t k = 0; k < D; ++k) centroid[k] += simplex[v].x[k] / D;
        auto along = [&](double coeff) {
            std::array<double, D> x;
            for (std::size_t k = 0; k < D; ++k)
                x[k] = centroid[k] + coeff * (centroid[k] - simplex[D].x[k]);
            return x;
        };
        auto shrink = [&] {
            for (std::size_t v = 1; v <= D; ++v) {
                for (std::size_t k = 0; k < D; ++k)
                    simplex[v].x[k] = 0.5 * (simplex[0].x[k] + simplex[v].x[k]);
                simplex[v].g = eval(simplex[v].x);
            }
        };

        const std::array<double, D> xr = along(1.0);
        const double gr = eval(xr);
        if (gr < simplex[0].g) {
            const std::array<double, D> xe = along(2.0);
            const double ge = eval(xe);
            simplex[D] = ge < gr ? Vertex{xe, ge} : Vertex{xr, gr};
        } else if (gr < simplex[D - 1].g) {
            simplex[D] = Vertex{xr, gr};
        } else if (gr < simplex[D].g) {
            const std::array<double, D> xc = along(0.5);
            const double gc = eval(xc);
            if (gc <= gr)
                simplex[D] = Vertex{xc, gc};
            else
                shrink();
        } else {
            const std::array<double, D> xc = along(-0.5);
            const double gc = eval(xc);
            if (gc < simplex[D].g)
                simplex[D] = Vertex{xc, gc};
            else
                shrink();
        }
        order();
        if (trace) trace->push_back(trace_sign * -simplex[0].g);
    }
    return {simplex[0].x, -simplex[0].g};
}

} // namespace detail

/// Extremum of a scalar objective over measurement directions. Coarse
/// hemisphere scan (ties resolved toward the lowest grid index), then
/// simplex refinement in (theta, phi).
template <typename F>
DirectionResult extremize_one_direction(F&& objective, Mode mode, const SearchConfig& cfg) {
    cfg.check();
    const double sign = mode == Mode::Maximize ? 1.0 : -1.0;

    const auto grid = detail::hemisphere_grid(cfg);
    std::size_t best_index = 0;
    double best_score = sign * objective(grid[0].dir);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double score = sign * objective(grid[k].dir);
        if (score > best_score + detail::kTieEpsilon) {
            best_score = score;
            best_index = k;
        }
    }

    const double dtheta = 0.5 * detail::kPi / (cfg.grid_polar - 1);
    const double dphi = 2.0 * detail::kPi / cfg.grid_azimuthal;
    DirectionResult result{grid[best_index].dir, sign * best_score, {}};
    auto score_at = [&](const std::array<double, 2>& angles) {
        return sign * objective(direction_from_spherical(angles[0], angles[1]));
    };
    const auto [angles, score] = detail::nelder_mead_max<2>(
        score_at, {grid[best_index].theta, grid[best_index].phi}, {0.5 * dtheta, 0.5 * dphi},
        cfg.refine_iterations, cfg.refine_tolerance, &result.refinement_trace, sign);
    if (score > best_score) {
        result.direction = direction_from_spherical(angles[0], angles[1]);
        result.value = sign * score;
    }
    return result;
}

/// Extremum over an ordered pair of directions: coarse product-grid scan of
/// hemisphere x hemisphere, then alternating single-direction refinement
/// until the objective stops improving.
template <typename F2>
DirectionPairResult extremize_two_directions(F2&& objective, Mode mode, const SearchConfig& cfg) {
    cfg.check();
    const double sign = mode == Mode::Maximize ? 1.0 : -1.0;

    const auto grid = detail::hemisphere_grid(cfg);
    std::size_t best_a = 0, best_b = 0;
    double best_score = sign * objective(grid[0].dir, grid[0].dir);
    for (std::size_t ia = 0; ia < grid.size(); ++ia) {
        const Direction& da = grid[ia].dir;
        for (std::size_t ib = 0; ib < grid.size(); ++ib) {
            const double score = sign * objective(da, grid[ib].dir);
            if (score > best_score + detail::kTieEpsilon) {
                best_score = score;
                best_a = ia;
                best_b = ib;
            }
        }
    }

    const double dtheta = 0.5 * detail::kPi / (cfg.grid_polar - 1);
    const double dphi = 2.0 * detail::kPi / cfg.grid_azimuthal;
    const std::array<double, 2> step{0.5 * dtheta, 0.5 * dphi};

    std::array<double, 2> angles_a{grid[best_a].theta, grid[best_a].phi};
    std::array<double, 2> angles_b{grid[best_b].theta, grid[best_b].phi};
    DirectionPairResult result{grid[best_a].dir, grid[best_b].dir, sign * best_score, {}};
    double current = best_score;

    for (int round = 0; round < cfg.refine_iterations; ++round) {
        const double round_start = current;

        auto score_a = [&](const std::array<double, 2>& x) {
            return sign * objective(direction_from_spherical(x[0], x[1]), result.b);
        };
        auto [xa, score_after_a] =
            detail::nelder_mead_max<2>(score_a, angles_a, step, cfg.refine_iterations,
                                       cfg.refine_tolerance, &result.refinement_trace, sign);
        if (score_after_a > current) {
            angles_a = xa;
            result.a = direction_from_spherical(xa[0], xa[1]);
            current = score_after_a;
        }

        auto score_b = [&](const std::array<double, 2>& x) {
            return sign * objective(result.a, direction_from_spherical(x[0], x[1]));
        };
        auto [xb, score_after_b] =
            detail::nelder_mead_max<2>(score_b, angles_b, step, cfg.refine_iterations,
                                       cfg.refine_tolerance, &result.refinement_trace, sign);
        if (score_after_b > current) {
            angles_b = xb;
            result.b = direction_from_spherical(xb[0], xb[1]);
            current = score_after_b;
        }

        if (current - round_start < cfg.refine_tolerance) break;
    }

    // Alternating moves stall on ridges where the optimal a and b are
    // strongly coupled (nearly maximally entangled states). A joint simplex
    // pass over all four angles follows those ridges; repeat while it keeps
    // paying.
    auto score_joint = [&](const std::array<double, 4>& x) {
        return sign * objective(direction_from_spherical(x[0], x[1]),
                                direction_from_spherical(x[2], x[3]));
    };
    for (int round = 0; round < cfg.refine_iterations; ++round) {
        const std::array<double, 4> start{angles_a[0], angles_a[1], angles_b[0], angles_b[1]};
        const std::array<double, 4> step4{step[0], step[1], step[0], step[1]};
        auto [xj, joint_score] =
            detail::nelder_mead_max<4>(score_joint, start, step4, cfg.refine_iterations,
                                       cfg.refine_tolerance, &result.refinement_trace, sign);
        const double gain = joint_score - current;
        if (gain > 0.0) {
            current = joint_score;
            angles_a = {xj[0], xj[1]};
            angles_b = {xj[2], xj[3]};
            result.a = direction_from_spherical(xj[0], xj[1]);
            result.b = direction_from_spherical(xj[2], xj[3]);
        }
        if (gain < cfg.refine_tolerance) break;
    }

    result.value = sign * current;
    return result;
}

} // namespace qumi::optimizer
