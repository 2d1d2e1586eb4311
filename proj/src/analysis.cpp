#include "lsmcf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lsmcf/solver.hpp"

namespace lsmcf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double dist2_point_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
    const double dx = b[0] - a[0], dy = b[1] - a[1], dz = b[2] - a[2];
    const double rx = p[0] - a[0], ry = p[1] - a[1], rz = p[2] - a[2];
    const double l2 = dx * dx + dy * dy + dz * dz;
    double t = l2 > 0 ? (rx * dx + ry * dy + rz * dz) / l2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double ex = rx - t * dx, ey = ry - t * dy, ez = rz - t * dz;
    return ex * ex + ey * ey + ez * ez;
}

struct Primitives {
    std::vector<Vec3> points;
    std::vector<std::pair<Vec3, Vec3>> segments;
};

// Contour vertices and edges; a front without contour falls back to its
// marked nodes (as degenerate segments).
Primitives primitives(const FrontSet& f) {
    Primitives p;
    for (std::size_t k = 0; k < f.pieces.size(); ++k) {
        const auto& piece = f.pieces[k];
        for (std::size_t s = 0; s < piece.size(); ++s) {
            p.points.push_back(piece[s]);
            if (piece.size() == 1) p.segments.emplace_back(piece[s], piece[s]);
            if (s + 1 < piece.size()) p.segments.emplace_back(piece[s], piece[s + 1]);
        }
        if (f.grid.dim() == 3 && piece.size() == 3) p.segments.emplace_back(piece[2], piece[0]);
    }
    if (p.points.empty())
        for (std::size_t n : f.marked_nodes) {
            const Vec3 x = f.grid.point(n);
            p.points.push_back(x);
            p.segments.emplace_back(x, x);
        }
    return p;
}

double directed(const Primitives& a, const Primitives& b, bool take_max) {
    double acc = take_max ? 0.0 : kInf;
    for (const auto& p : a.points) {
        double best = kInf;
        for (const auto& [s0, s1] : b.segments) {
            best = std::min(best, dist2_point_segment(p, s0, s1));
            if (take_max && best <= acc) break;
        }
        acc = take_max ? std::max(acc, best) : std::min(acc, best);
    }
    return std::sqrt(acc);
}

double norm2(const Vec3& v) { return std::hypot(std::hypot(v[0], v[1]), v[2]); }

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

}  // namespace

double hausdorff(const FrontSet& a, const FrontSet& b) {
    if (a.empty() || b.empty()) throw Error("hausdorff: empty front");
    const auto pa = primitives(a), pb = primitives(b);
    return std::max(directed(pa, pb, true), directed(pb, pa, true));
}

double set_distance(const FrontSet& a, const FrontSet& b) {
    if (a.empty() || b.empty()) throw Error("set_distance: empty front");
    const auto pa = primitives(a), pb = primitives(b);
    return std::min(directed(pa, pb, false), directed(pb, pa, false));
}

RadiusStats radius_stats(const FrontSet& f, const Vec3& c) {
    RadiusStats r;
    r.min = kInf;
    r.max = 0;
    double wsum = 0, acc = 0;
    for (const auto& piece : f.pieces) {
        for (const auto& p : piece) {
            const double d = norm2(sub(p, c));
            r.min = std::min(r.min, d);
            r.max = std::max(r.max, d);
            ++r.vertices;
        }
        if (f.grid.dim() == 3 && piece.size() == 3) {
            const Vec3 u = sub(piece[1], piece[0]), v = sub(piece[2], piece[0]);
            const Vec3 n{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
            const double area = 0.5 * norm2(n);
            const Vec3 m{(piece[0][0] + piece[1][0] + piece[2][0]) / 3, (piece[0][1] + piece[1][1] + piece[2][1]) / 3,
                         (piece[0][2] + piece[1][2] + piece[2][2]) / 3};
            acc += area * norm2(sub(m, c));
            wsum += area;
        } else {
            for (std::size_t s = 0; s + 1 < piece.size(); ++s) {
                const double len = norm2(sub(piece[s + 1], piece[s]));
                const Vec3 m{0.5 * (piece[s][0] + piece[s + 1][0]), 0.5 * (piece[s][1] + piece[s + 1][1]),
                             0.5 * (piece[s][2] + piece[s + 1][2])};
                acc += len * norm2(sub(m, c));
                wsum += len;
            }
        }
    }
    if (r.vertices == 0) {
        r.min = 0;
        return r;
    }
    r.mean = wsum > 0 ? acc / wsum : r.min;
    return r;
}

RadiusStats innermost_loop_radius(const FrontSet& f, const Vec3& c) {
    RadiusStats best;
    double best_mean = kInf;
    for (std::size_t k = 0; k < f.pieces.size(); ++k) {
        if (!f.closed[k] || f.grid.dim() != 2) continue;
        const auto& loop = f.pieces[k];
        double wind = 0;
        for (std::size_t s = 0; s + 1 < loop.size(); ++s) {
            const double a0 = std::atan2(loop[s][1] - c[1], loop[s][0] - c[0]);
            const double a1 = std::atan2(loop[s + 1][1] - c[1], loop[s + 1][0] - c[0]);
            double d = a1 - a0;
            const double pi = std::acos(-1.0);
            while (d > pi) d -= 2 * pi;
            while (d < -pi) d += 2 * pi;
            wind += d;
        }
        if (std::abs(wind) < 1.0) continue;
        FrontSet single;
        single.grid = f.grid;
        single.pieces = {loop};
        single.closed = {true};
        const RadiusStats r = radius_stats(single, c);
        if (r.mean < best_mean) {
            best_mean = r.mean;
            best = r;
        }
    }
    return best;
}

double max_outside_distance(const FrontSet& f, const Vec3& c, double radius) {
    double m = 0;
    for (const auto& piece : f.pieces)
        for (const auto& p : piece) m = std::max(m, norm2(sub(p, c)) - radius);
    return m;
}

double lipschitz_estimate(const ScalarField& u, bool of_modulus) {
    const Grid& g = u.grid();
    const double* v = u.data();
    double L = 0;
    for (int k = 0; k < g.dim(); ++k) {
        // Row-major layout: along axis k the nodes with a forward neighbour
        // form, in every block of stride * size, its first stride * (size - 1) entries.
        const std::size_t st = g.stride(k);
        const std::size_t block = st * std::size_t(g.size(k));
        const std::size_t run = st * std::size_t(g.size(k) - 1);
        auto scan = [&](auto value) {
            double m = 0;
            for (std::size_t b = 0; b < u.size(); b += block)
                for (std::size_t i = b; i < b + run; ++i) m = std::max(m, std::abs(value(v[i + st]) - value(v[i])));
            return m;
        };
        const double m = of_modulus ? scan([](double x) { return std::abs(x); }) : scan([](double x) { return x; });
        L = std::max(L, m / g.spacing(k));
    }
    return L;
}

HolderFit holder_exponent(const std::vector<std::pair<double, double>>& series) {
    if (series.empty() || series.front().first != 0.0) throw Error("holder_exponent: series must start at t = 0");
    const double u0 = series.front().second;
    HolderFit fit;
    std::size_t positive = 0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    fit.t_lo = kInf;
    for (std::size_t k = 1; k < series.size(); ++k) {
        const double t = series[k].first;
        if (!(t > 0)) throw Error("holder_exponent: times must be positive after the reference sample");
        ++positive;
        const double du = std::abs(series[k].second - u0);
        if (du == 0) continue;
        const double x = std::log(t), y = std::log(du);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
        fit.t_lo = std::min(fit.t_lo, t);
        fit.t_hi = std::max(fit.t_hi, t);
    }
    if (positive < 8) throw Error("holder_exponent: need at least 8 samples with t > 0");
    fit.samples = n;
    if (n < 2) {
        fit.degenerate = true;
        fit.exponent = kInf;
        if (n == 0) fit.t_lo = 0;
        return fit;
    }
    const double den = n * sxx - sx * sx;
    fit.exponent = (n * sxy - sx * sy) / den;
    return fit;
}

HolderBound holder_bound_check(const std::vector<std::pair<double, double>>& series, double exponent,
                               double t_fit) {
    if (series.empty() || series.front().first != 0.0) throw Error("holder_bound_check: series must start at t = 0");
    const double u0 = series.front().second;
    std::size_t kfit = 0;
    for (std::size_t k = 1; k < series.size(); ++k)
        if (kfit == 0 || std::abs(series[k].first - t_fit) < std::abs(series[kfit].first - t_fit)) kfit = k;
    if (kfit == 0) throw Error("holder_bound_check: no sample with t > 0");
    HolderBound b;
    const double tf = series[kfit].first;
    b.c = std::abs(series[kfit].second - u0) / std::pow(tf, exponent);
    b.max_ratio = 0;
    bool flat_violation = false;
    for (std::size_t k = 1; k < series.size(); ++k) {
        const double t = series[k].first;
        if (t > tf) continue;
        const double du = std::abs(series[k].second - u0);
        if (b.c > 0)
            b.max_ratio = std::max(b.max_ratio, du / (b.c * std::pow(t, exponent)));
        else if (du > 0)
            flat_violation = true;
    }
    b.holds = !flat_violation && b.max_ratio <= 1.0 + 1e-12;
    return b;
}

double fattening_ratio(const ScalarField& u, double eta, double ell) {
    if (!(ell > 0)) throw Error("fattening_ratio: reference length must be positive");
    if (!(eta > 0)) throw Error("fattening_ratio: eta must be positive");
    const Grid& g = u.grid();
    double cell = 1;
    for (int k = 0; k < g.dim(); ++k) cell *= g.spacing(k);
    std::size_t count = 0;
    for (double v : u.values())
        if (v <= eta) ++count;
    return double(count) * cell / (2 * eta * ell);
}

ResidualReport pde_residual(const std::vector<ScalarField>& seq, double dt, const OperatorParams& params,
                            const std::vector<std::vector<std::uint8_t>>* exclude, bool keep_fields) {
    if (seq.size() < 2) throw Error("pde_residual: need at least two fields");
    if (!(dt > 0)) throw Error("pde_residual: dt must be positive");
    const Grid& g = seq.front().grid();
    validate(params, g);
    ResidualReport rep;
    rep.min = kInf;
    rep.max = -kInf;
    std::vector<double> r;
    for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
        const ScalarField& u = seq[k];
        const ScalarField& v = seq[k + 1];
        if (u.grid() != g || v.grid() != g) throw Error("pde_residual: fields on different grids");
        curvature_rhs_into(u, params, r);
        ResidualStep st;
        st.index = k;
        st.min = kInf;
        st.max = -kInf;
        std::vector<double> field(keep_fields ? u.size() : 0);
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double res = (v[i] - u[i]) / dt - r[i];
            if (keep_fields) field[i] = res;
            // Central gradient magnitude for the kink test (branch cuts flip neighbours).
            const auto ijk = g.unflatten(i);
            double grad2 = 0;
            for (int a = 0; a < g.dim(); ++a) {
                std::array<int, 3> p = ijk, m = ijk;
                p[a] = std::min(p[a] + 1, g.size(a) - 1);
                m[a] = std::max(m[a] - 1, 0);
                double up = u[g.flatten(p)], um = u[g.flatten(m)];
                if (params.cuts) {
                    int dp[3] = {0, 0, 0};
                    dp[a] = 1;
                    if (params.cuts->cut(i, dp[0], dp[1], dp[2])) up = -up;
                    dp[a] = -1;
                    if (params.cuts->cut(i, dp[0], dp[1], dp[2])) um = -um;
                }
                const double d = (up - um) / (2 * g.spacing(a));
                grad2 += d * d;
            }
            const bool kink = std::sqrt(grad2) < params.eps;
            const bool masked = exclude && k < exclude->size() && !(*exclude)[k].empty() && (*exclude)[k][i];
            if (kink || masked) {
                ++st.excluded;
                continue;
            }
            ++st.evaluated;
            st.min = std::min(st.min, res);
            st.max = std::max(st.max, res);
        }
        rep.min = std::min(rep.min, st.min);
        rep.max = std::max(rep.max, st.max);
        rep.excluded += st.excluded;
        rep.steps.push_back(st);
        if (keep_fields) rep.fields.emplace_back(g, std::move(field));
    }
    rep.max_abs = std::max(std::abs(rep.min), std::abs(rep.max));
    return rep;
}

ResidualReport pde_residual(const Trajectory& traj, const OperatorParams& params, bool keep_fields) {
    if (traj.snapshots.size() < 2) throw Error("pde_residual: trajectory has fewer than two snapshots");
    for (std::size_t k = 0; k + 1 < traj.steps.size(); ++k)
        if (traj.steps[k + 1] - traj.steps[k] != 1)
            throw Error("pde_residual: trajectory snapshots are not consecutive steps");
    return pde_residual(traj.snapshots, traj.dt, params, nullptr, keep_fields);
}

double tubular_curvature(double kappa, double d, TubeConvention convention) {
    const double den = convention == TubeConvention::OffsetFromSurface ? 1 + d * kappa : 1 - d * kappa;
    if (std::abs(den) < 1e-12) throw Error("tubular_curvature: focal point reached");
    return kappa / den;
}

TubeReport tube_mean_convexity_check(const std::vector<std::vector<double>>& samples, double delta, int k) {
    if (k < 2) throw Error("tube_mean_convexity_check: codimension must be >= 2");
    if (!(delta > 0)) throw Error("tube_mean_convexity_check: delta must be positive");
    if (samples.empty()) throw Error("tube_mean_convexity_check: no samples");
    TubeReport rep;
    rep.min_h = kInf;
    for (std::size_t s = 0; s < samples.size(); ++s) {
        double h = (k - 1) / delta;
        for (double kappa : samples[s]) {
            if (1 - delta * kappa <= 1e-12) throw Error("tube_mean_convexity_check: delta beyond the focal threshold");
            h -= tubular_curvature(kappa, delta, TubeConvention::SigmaTube);
        }
        if (h < rep.min_h) {
            rep.min_h = h;
            rep.argmin = s;
        }
    }
    return rep;
}

std::vector<std::vector<double>> circle_in_r3_samples(double radius, int n) {
    if (!(radius > 0) || n < 1) throw Error("circle_in_r3_samples: bad arguments");
    const double pi = std::acos(-1.0);
    std::vector<std::vector<double>> out;
    for (int s = 0; s < n; ++s) out.push_back({std::cos(2 * pi * s / n) / radius});
    return out;
}

ScalarField barrier_field(const Grid& grid, double lip, double c, double delta, const Vec3& x0, double u0_at_x0,
                          double t) {
    ScalarField h(grid, 0.0);
    const double a = c * t / std::sqrt(delta);
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
        const Vec3 p = grid.point(i);
        double r2 = 0;
        for (int k = 0; k < grid.dim(); ++k) r2 += (p[k] - x0[k]) * (p[k] - x0[k]);
        h[i] = lip * (a + std::sqrt(delta + r2)) + u0_at_x0;
    }
    return h;
}

}  // namespace lsmcf
