#pragma once

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "linconts/lp.hpp"
#include "linconts/rng.hpp"

namespace linconts {

/// Ground-truth bandit instance: arm parameters plus the coverage
/// constraint eta.
struct BanditInstance {
    std::vector<ArmParams> arms;
    double eta = 0.0;
    std::string name;

    int num_arms() const { return static_cast<int>(arms.size()); }
    bool feasible() const {
        for (const auto& a : arms)
            if (a.mu >= eta) return true;
        return false;
    }
};

inline int sample_reward_event(const BanditInstance& instance, int arm, Rng& rng) {
    if (arm < 0 || arm >= instance.num_arms())
        throw std::invalid_argument("arm index out of range");
    return rng.bernoulli(instance.arms[arm].mu);
}

class parse_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

inline double parse_double(const std::string& s, int row, const char* what) {
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r')) --end;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw parse_error("row " + std::to_string(row) + ": non-numeric " + what +
                          " '" + s + "'");
    return value;
}

inline long parse_long(const std::string& s, int row, const char* what) {
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r')) --end;
    long value = 0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw parse_error("row " + std::to_string(row) + ": non-integer " + what +
                          " '" + s + "'");
    return value;
}

inline std::string strip(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Load an instance from a CSV file with header `arm_id,mu,r`. Lines
/// starting with '#' are comments. Rows may appear in any order; arms are
/// sorted by arm_id. eta is not part of the file and defaults to 0 on the
/// returned instance.
inline BanditInstance load_arms_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path);

    BanditInstance instance;
    instance.name = path;
    std::map<long, ArmParams> by_id;

    std::string line;
    int row = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++row;
        const std::string s = detail::strip(line);
        if (s.empty() || s[0] == '#') continue;
        if (!header_seen) {
            if (s != "arm_id,mu,r")
                throw parse_error("row " + std::to_string(row) +
                                  ": expected header 'arm_id,mu,r', got '" + s + "'");
            header_seen = true;
            continue;
        }
        auto fields = detail::split_csv_line(s);
        if (fields.size() != 3)
            throw parse_error("row " + std::to_string(row) + ": expected 3 fields, got " +
                              std::to_string(fields.size()));
        const long id = detail::parse_long(fields[0], row, "arm_id");
        ArmParams arm;
        arm.mu = detail::parse_double(fields[1], row, "mu");
        arm.r = detail::parse_double(fields[2], row, "r");
        if (arm.mu < 0.0 || arm.mu > 1.0)
            throw parse_error("row " + std::to_string(row) + ": mu out of range [0, 1]");
        if (arm.r <= 0.0 || arm.r > 1.0)
            throw parse_error("row " + std::to_string(row) + ": r out of range (0, 1]");
        if (!by_id.emplace(id, arm).second)
            throw parse_error("row " + std::to_string(row) + ": duplicate arm_id " +
                              std::to_string(id));
    }
    if (!header_seen) throw parse_error("no header in " + path);
    if (by_id.empty()) throw parse_error("no arms in " + path);
    for (const auto& [id, arm] : by_id) instance.arms.push_back(arm);
    return instance;
}

namespace detail {

inline BanditInstance synth_uniform(int n, double mu_max, double r_max, double eta,
                                    const std::string& name, Rng& rng) {
    if (n < 2) throw std::invalid_argument("synthetic instance needs n >= 2");
    BanditInstance instance;
    instance.eta = eta;
    instance.name = name;
    for (int attempt = 0; attempt < 100; ++attempt) {
        instance.arms.clear();
        for (int i = 0; i < n; ++i) {
            ArmParams arm;
            arm.mu = mu_max * rng.uniform();
            arm.r = r_max * (1.0 - rng.uniform());  // in (0, r_max]
            instance.arms.push_back(arm);
        }
        if (instance.feasible()) return instance;
    }
    throw std::runtime_error("could not draw a feasible instance in 100 attempts");
}

}  // namespace detail

/// Arms with mu in [0, 0.30] and r in (0, 1], eta = 0.25.
inline BanditInstance synth_coupon_like(int n, Rng& rng) {
    return detail::synth_uniform(n, 0.30, 1.0, 0.25, "coupon-like", rng);
}

/// Arms with mu in [0, 1] and r in (0, 0.40], eta = 0.50.
inline BanditInstance synth_edx_like(int n, Rng& rng) {
    return detail::synth_uniform(n, 1.0, 0.40, 0.50, "edx-like", rng);
}

/// (v - min) / (max - min) elementwise.
inline std::vector<double> normalize_minmax(const std::vector<double>& values) {
    if (values.size() < 2)
        throw std::invalid_argument("normalize_minmax needs at least two values");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;
    if (hi == lo) throw std::invalid_argument("normalize_minmax: all values equal");
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - lo) / (hi - lo);
    return out;
}

}  // namespace linconts
