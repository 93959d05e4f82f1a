#include "sbus/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace sbus {

void ArchParams::validate() const {
    if (d_qu <= 0 || v_sh <= 0 || t_1q <= 0 || t_2q <= 0 || t_meas <= 0) {
        throw std::invalid_argument("architecture parameters must be strictly positive");
    }
}

long total_shuttle_distance(const Placement& placement, const std::vector<Chain>& chains) {
    auto pos = placement.position_map();
    long total = 0;
    for (const auto& chain : chains) {
        auto steps = chain.active_steps();
        if (steps.empty()) continue;
        total += 2 * long(pos.at(steps.back()) - pos.at(chain.data));
    }
    return total;
}

std::array<long, 5> placement_slice_times(const Placement& placement,
                                          const std::vector<Chain>& chains) {
    auto pos = placement.position_map();
    std::array<long, 5> t{};
    for (const auto& chain : chains) {
        long prev = pos.at(chain.data);
        long last = prev;
        for (int s = 0; s < 4; ++s) {
            if (!chain.steps[s]) continue;
            long cur = pos.at(*chain.steps[s]);
            t[s] = std::max(t[s], cur - prev);
            prev = cur;
            last = cur;
        }
        t[4] = std::max(t[4], last - pos.at(chain.data));
    }
    return t;
}

std::array<long, 5> layout_slice_times(const AugmentedLayout& layout) {
    std::array<long, 5> t{};
    for (const auto& path : layout.data_path) {
        for (int s = 1; s <= 4; ++s) {
            t[s - 1] = std::max(t[s - 1], long(std::abs(path[s] - path[s - 1])));
        }
        t[4] = std::max(t[4], long(std::abs(path[5] - path[4])));
    }
    return t;
}

double cycle_time(const std::array<long, 5>& slice_times, const ArchParams& arch) {
    arch.validate();
    double shuttle_unit = arch.d_qu / arch.v_sh;
    double t = arch.t_1q;  // ancilla basis prep
    for (int s = 0; s < 4; ++s) t += double(slice_times[s]) * shuttle_unit + arch.t_2q;
    t += arch.t_1q;  // basis unprep
    t += double(slice_times[4]) * shuttle_unit;  // return shuttle
    t += arch.t_meas;
    return t;
}

MetricsReport compute_metrics(const AugmentedLayout& layout, const ArchParams& arch) {
    arch.validate();
    MetricsReport report;
    report.total_distance_dots = total_shuttle_distance(layout.placement, layout.chains);
    report.total_distance_m = double(report.total_distance_dots) * arch.d_qu;
    report.slice_times_dots = layout_slice_times(layout);
    for (int s = 0; s < 5; ++s) {
        report.slice_times_s[s] = double(report.slice_times_dots[s]) * arch.d_qu / arch.v_sh;
    }
    report.cycle_time_s = cycle_time(report.slice_times_dots, arch);
    report.bus_length = layout.bus_length;
    report.extra_dots = layout.extra_dot_count();
    auto pos = layout.placement.position_map();
    for (const auto& chain : layout.chains) {
        auto steps = chain.active_steps();
        long span = steps.empty() ? 0 : pos.at(steps.back()) - pos.at(chain.data);
        report.per_chain_distance.push_back(2 * span);
    }
    return report;
}

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::Naive: return "naive";
        case Strategy::ZigZag: return "zigzag";
        case Strategy::Optimal: return "optimal";
    }
    throw std::logic_error("bad strategy");
}

Strategy strategy_from_string(const std::string& s) {
    if (s == "naive") return Strategy::Naive;
    if (s == "zigzag") return Strategy::ZigZag;
    if (s == "optimal") return Strategy::Optimal;
    throw std::invalid_argument("unknown strategy: " + s);
}

std::vector<ScalingRow> scaling_sweep(int d_min, int d_max, Strategy strategy,
                                      const ArchParams& arch, double optimal_budget_seconds) {
    arch.validate();
    if (d_min < 3 || d_min > d_max) throw std::invalid_argument("bad distance range");
    std::vector<ScalingRow> rows;
    for (int d = d_min | 1; d <= d_max; d += 2) {
        auto code = build_rotated_surface_code(d);
        auto chains = extract_chains(code, build_schedule(code));
        auto dag = build_chain_dag(chains);

        ScalingRow row;
        row.distance = d;
        row.strategy = strategy;
        Placement placement;
        switch (strategy) {
            case Strategy::Naive:
                placement = naive_topological(dag);
                break;
            case Strategy::ZigZag:
                placement = zigzag(code, dag);
                break;
            case Strategy::Optimal: {
                Placement seed = zigzag(code, dag);
                auto result = optimal(dag, ObjectiveWeights{}, optimal_budget_seconds, &seed);
                placement = result.placement;
                row.certified = result.optimality == Optimality::Certified;
                break;
            }
        }
        auto t = placement_slice_times(placement, chains);
        for (long ti : t) row.time_sum += ti;
        row.total_distance = total_shuttle_distance(placement, chains);
        auto layout = insert_idle_dots(placement, chains);
        row.extra_dots = layout.extra_dot_count();
        row.bus_length = layout.bus_length;
        row.cycle_time_s = cycle_time(layout_slice_times(layout), arch);
        rows.push_back(row);
    }
    return rows;
}

void write_scaling_csv(const std::vector<ScalingRow>& rows, std::ostream& out) {
    out << "distance,strategy,time_sum,total_distance,extra_dots,bus_length,"
           "cycle_time_s,certified\n";
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.9g", r.cycle_time_s);
        out << r.distance << "," << to_string(r.strategy) << "," << r.time_sum << ","
            << r.total_distance << "," << r.extra_dots << "," << r.bus_length << ","
            << buf << "," << (r.certified ? 1 : 0) << "\n";
    }
}

std::vector<double> polyfit(const std::vector<double>& x, const std::vector<double>& y,
                            int degree, double* r_squared) {
    if (x.size() != y.size() || static_cast<int>(x.size()) <= degree) {
        throw std::invalid_argument("polyfit needs more points than coefficients");
    }
    const int m = degree + 1;
    // Normal equations; degrees here are tiny so conditioning is fine.
    std::vector<double> ata(m * m, 0.0), atb(m, 0.0);
    for (size_t i = 0; i < x.size(); ++i) {
        double xp = 1.0;
        std::vector<double> row(m);
        for (int j = 0; j < m; ++j) {
            row[j] = xp;
            xp *= x[i];
        }
        for (int j = 0; j < m; ++j) {
            atb[j] += row[j] * y[i];
            for (int k = 0; k < m; ++k) ata[j * m + k] += row[j] * row[k];
        }
    }
    // Gaussian elimination with partial pivoting.
    std::vector<double> c = atb;
    for (int col = 0; col < m; ++col) {
        int pivot = col;
        for (int r = col + 1; r < m; ++r) {
            if (std::abs(ata[r * m + col]) > std::abs(ata[pivot * m + col])) pivot = r;
        }
        for (int k = 0; k < m; ++k) std::swap(ata[col * m + k], ata[pivot * m + k]);
        std::swap(c[col], c[pivot]);
        double diag = ata[col * m + col];
        if (diag == 0.0) throw std::runtime_error("singular polyfit system");
        for (int r = 0; r < m; ++r) {
            if (r == col) continue;
            double f = ata[r * m + col] / diag;
            for (int k = 0; k < m; ++k) ata[r * m + k] -= f * ata[col * m + k];
            c[r] -= f * c[col];
        }
    }
    for (int j = 0; j < m; ++j) c[j] /= ata[j * m + j];

    if (r_squared) {
        double mean = 0.0;
        for (double v : y) mean += v;
        mean /= double(y.size());
        double ss_res = 0.0, ss_tot = 0.0;
        for (size_t i = 0; i < x.size(); ++i) {
            double fit = 0.0, xp = 1.0;
            for (int j = 0; j < m; ++j) {
                fit += c[j] * xp;
                xp *= x[i];
            }
            ss_res += (y[i] - fit) * (y[i] - fit);
            ss_tot += (y[i] - mean) * (y[i] - mean);
        }
        *r_squared = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
    }
    return c;
}

}  // namespace sbus
