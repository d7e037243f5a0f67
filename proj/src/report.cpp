#include "xyz/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace xyz {

void Tolerances::set_global(double tol) { global_ = tol; }

void Tolerances::set(const std::string& prefix, double tol) { by_prefix_[prefix] = tol; }

double Tolerances::get(const std::string& id, double fallback) const {
    if (global_) return *global_;
    // Longest matching prefix wins.
    std::size_t best = 0;
    double out = fallback;
    for (const auto& [k, v] : by_prefix_)
        if (id.compare(0, k.size(), k) == 0 && k.size() >= best) {
            best = k.size();
            out = v;
        }
    return out;
}

const CheckRecord& Report::check(const std::string& id, const std::string& relation, double residual, double tolerance,
                                 std::string detail) {
    CheckRecord r{id, relation, residual, tolerance, std::isfinite(residual) && residual < tolerance, std::move(detail)};
    records_.push_back(std::move(r));
    if (!records_.back().pass && fail_fast) stop = true;
    return records_.back();
}

const CheckRecord& Report::expect(const std::string& id, const std::string& relation, bool ok, std::string detail) {
    return check(id, relation, ok ? 0.0 : 1.0, 0.5, std::move(detail));
}

void Report::note(const std::string& key, nlohmann::json value) { notes_[key] = std::move(value); }

void Report::warn(const std::string& message) { warnings_.push_back(message); }

void Report::merge(const Report& other) {
    records_.insert(records_.end(), other.records_.begin(), other.records_.end());
    warnings_.insert(warnings_.end(), other.warnings_.begin(), other.warnings_.end());
    for (auto it = other.notes_.begin(); it != other.notes_.end(); ++it) notes_[it.key()] = it.value();
    stop = stop || other.stop;
}

bool Report::all_pass() const { return failures() == 0; }

int Report::failures() const {
    return int(std::count_if(records_.begin(), records_.end(), [](const CheckRecord& r) { return !r.pass; }));
}

double Report::worst_ratio() const {
    double w = 0;
    for (const auto& r : records_) w = std::max(w, std::isfinite(r.residual) ? r.residual / r.tolerance : INFINITY);
    return w;
}

namespace {

nlohmann::json num(double v) {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

}  // namespace

nlohmann::json Report::to_json() const {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& r : records_) {
        nlohmann::json j = {{"check_id", r.id},
                            {"relation", r.relation},
                            {"residual", num(r.residual)},
                            {"tolerance", r.tolerance},
                            {"pass", r.pass}};
        if (!r.detail.empty()) j["detail"] = r.detail;
        checks.push_back(std::move(j));
    }
    return {{"name", name_},
            {"pass", all_pass()},
            {"n_checks", records_.size()},
            {"n_failed", failures()},
            {"checks", checks},
            {"warnings", warnings_},
            {"notes", notes_}};
}

std::string format_double(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // snprintf honours LC_NUMERIC; force '.' so output never depends on locale.
    for (char& c : buf)
        if (c == ',') c = '.';
    return buf;
}

std::string Report::to_csv() const {
    std::ostringstream os;
    os << "check_id,relation,residual,tolerance,pass\n";
    for (const auto& r : records_)
        os << csv_field(r.id) << ',' << csv_field(r.relation) << ',' << format_double(r.residual) << ','
           << format_double(r.tolerance) << ',' << (r.pass ? "true" : "false") << '\n';
    return os.str();
}

}  // namespace xyz
