#include "ringdyn/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ringdyn/errors.hpp"

namespace ringdyn {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing", "path");
    return out;
}

double parse_double(const std::string& token, const std::string& path, std::size_t line) {
    const char* begin = token.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s:%zu: '%s' is not a number", path.c_str(), line,
                      token.c_str());
        throw ValidationError(buf, "trajectory");
    }
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream out = open_out(path);
    const bool curved = traj.space == Trajectory::Space::Curved;
    out << (curved ? "t,body,x,y,z,vx,vy,vz,m" : "t,body,x,y,vx,vy,m") << "\n";
    const std::size_t c = traj.coords();
    for (std::size_t k = 0; k < traj.samples(); ++k) {
        for (std::size_t i = 0; i < traj.n; ++i) {
            out << format_double(traj.times[k]) << ',' << i;
            for (std::size_t d = 0; d < c; ++d)
                out << ',' << format_double(traj.positions[k][i * c + d]);
            for (std::size_t d = 0; d < c; ++d)
                out << ',' << format_double(traj.velocities[k][i * c + d]);
            out << ',' << format_double(traj.masses[k][i]) << "\n";
        }
    }
}

Trajectory read_trajectory_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'", "trajectory");

    std::string line;
    if (!std::getline(in, line))
        throw ValidationError(path + ": empty file", "trajectory");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    Trajectory traj;
    if (line == "t,body,x,y,vx,vy,m") {
        traj.space = Trajectory::Space::Flat;
    } else if (line == "t,body,x,y,z,vx,vy,vz,m") {
        traj.space = Trajectory::Space::Curved;
    } else {
        throw ValidationError(path + ": unrecognized header '" + line + "'", "trajectory");
    }
    const std::size_t c = traj.coords();
    const std::size_t width = 2 + 2 * c + 1;

    std::vector<double> pos, vel, mas;
    double block_t = 0.0;
    std::size_t body_expected = 0;
    std::size_t line_no = 1;
    auto flush_block = [&]() {
        if (pos.empty()) return;
        if (traj.n == 0) {
            traj.n = body_expected;
        } else if (body_expected != traj.n) {
            throw ValidationError(path + ": body count changes between samples", "trajectory");
        }
        traj.times.push_back(block_t);
        traj.positions.push_back(pos);
        traj.velocities.push_back(vel);
        traj.masses.push_back(mas);
        pos.clear();
        vel.clear();
        mas.clear();
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f = split_csv(line);
        if (f.size() != width) {
            char buf[160];
            std::snprintf(buf, sizeof(buf), "%s:%zu: expected %zu fields, found %zu",
                          path.c_str(), line_no, width, f.size());
            throw ValidationError(buf, "trajectory");
        }
        double t = parse_double(f[0], path, line_no);
        double body = parse_double(f[1], path, line_no);
        std::size_t body_idx = static_cast<std::size_t>(body);
        bool new_block = pos.empty() || t != block_t;
        if (new_block) {
            flush_block();
            block_t = t;
            body_expected = 0;
        }
        if (body_idx != body_expected) {
            char buf[160];
            std::snprintf(buf, sizeof(buf), "%s:%zu: expected body %zu, found %s",
                          path.c_str(), line_no, body_expected, f[1].c_str());
            throw ValidationError(buf, "trajectory");
        }
        ++body_expected;
        for (std::size_t d = 0; d < c; ++d) pos.push_back(parse_double(f[2 + d], path, line_no));
        for (std::size_t d = 0; d < c; ++d)
            vel.push_back(parse_double(f[2 + c + d], path, line_no));
        mas.push_back(parse_double(f[2 + 2 * c], path, line_no));
    }
    flush_block();
    if (traj.samples() == 0)
        throw ValidationError(path + ": no samples", "trajectory");
    for (std::size_t k = 1; k < traj.samples(); ++k)
        if (!(traj.times[k] > traj.times[k - 1]))
            throw ValidationError(path + ": sample times must increase", "trajectory");

    if (traj.space == Trajectory::Space::Curved) {
        // The file does not carry sigma; recover it from the surface the
        // first sample sits on.
        double sphere = 0.0, hyper = 0.0;
        for (std::size_t i = 0; i < traj.n; ++i) {
            double x = traj.positions[0][3 * i], y = traj.positions[0][3 * i + 1],
                   z = traj.positions[0][3 * i + 2];
            sphere += std::abs(x * x + y * y + z * z - 1.0);
            hyper += std::abs(x * x + y * y - z * z + 1.0);
        }
        traj.sigma = (sphere <= hyper) ? 1 : -1;
    }
    return traj;
}

void write_gap_series_csv(const GapSeries& series, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "t,mu,argmin_j,r,weighted_rate,interval_id\n";
    for (std::size_t k = 0; k < series.times.size(); ++k) {
        out << format_double(series.times[k]) << ',' << format_double(series.mu[k]) << ','
            << (series.argmin[k] + 1) << ',' << format_double(series.r[k]) << ','
            << format_double(series.weighted_rate[k]) << ',' << series.interval_id[k] << "\n";
    }
}

std::vector<double> angular_momentum_series(const Trajectory& traj) {
    const std::size_t c = traj.coords();
    std::vector<double> L(traj.samples(), 0.0);
    for (std::size_t k = 0; k < traj.samples(); ++k) {
        double sum = 0.0;
        for (std::size_t i = 0; i < traj.n; ++i) {
            double x = traj.positions[k][i * c + 0], y = traj.positions[k][i * c + 1];
            double vx = traj.velocities[k][i * c + 0], vy = traj.velocities[k][i * c + 1];
            sum += traj.masses[k][i] * (x * vy - y * vx);
        }
        L[k] = sum;
    }
    return L;
}

void write_plotdata_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream out = open_out(path);
    const bool curved = traj.space == Trajectory::Space::Curved;
    const std::size_t c = traj.coords();
    const std::vector<double> L = angular_momentum_series(traj);
    out << (curved ? "t,r,z,angular_momentum,constraint_drift,tangency_drift"
                   : "t,r,angular_momentum")
        << "\n";
    for (std::size_t k = 0; k < traj.samples(); ++k) {
        double r_sum = 0.0, z_sum = 0.0, constraint = 0.0, tangency = 0.0;
        for (std::size_t i = 0; i < traj.n; ++i) {
            double x = traj.positions[k][i * c + 0], y = traj.positions[k][i * c + 1];
            r_sum += std::hypot(x, y);
            if (curved) {
                double z = traj.positions[k][i * c + 2];
                double vx = traj.velocities[k][i * c + 0], vy = traj.velocities[k][i * c + 1],
                       vz = traj.velocities[k][i * c + 2];
                double s = static_cast<double>(traj.sigma);
                z_sum += z;
                constraint = std::max(constraint,
                                      std::abs(x * x + y * y + s * z * z - s));
                tangency = std::max(tangency, std::abs(x * vx + y * vy + s * z * vz));
            }
        }
        double nb = static_cast<double>(traj.n);
        out << format_double(traj.times[k]) << ',' << format_double(r_sum / nb);
        if (curved) out << ',' << format_double(z_sum / nb);
        out << ',' << format_double(L[k]);
        if (curved)
            out << ',' << format_double(constraint) << ',' << format_double(tangency);
        out << "\n";
    }
}

nlohmann::json trajectory_diagnostics(const Trajectory& traj) {
    const std::vector<double> L = angular_momentum_series(traj);
    double drift = 0.0;
    for (double l : L) drift = std::max(drift, std::abs(l - L.front()));
    nlohmann::json j;
    j["space"] = traj.space == Trajectory::Space::Curved ? "curved" : "flat";
    j["n"] = traj.n;
    j["samples"] = traj.samples();
    j["steps"] = {{"accepted", traj.steps_accepted}, {"rejected", traj.steps_rejected}};
    j["max_residual"] = traj.max_residual;
    j["angular_momentum"] = {{"initial", L.front()},
                             {"final", L.back()},
                             {"max_drift", drift}};
    if (traj.space == Trajectory::Space::Curved) {
        j["sigma"] = traj.sigma;
        j["max_constraint_drift"] = traj.max_constraint_drift;
        j["max_tangency_drift"] = traj.max_tangency_drift;
        j["max_pre_projection_drift"] = traj.max_pre_projection_drift;
    }
    return j;
}

void write_json(const nlohmann::json& j, const std::string& path) {
    std::ofstream out = open_out(path);
    out << j.dump(2) << "\n";
}

}  // namespace ringdyn
