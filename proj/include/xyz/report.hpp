#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace xyz {

struct CheckRecord {
    std::string id;        // unique within a run, e.g. "sov.pseudo-eigen-left.N2.s3"
    std::string relation;  // the identity being verified
    double residual = 0;
    double tolerance = 0;
    bool pass = false;
    std::string detail;
};

// Tolerance lookup: a global override wins, then per-check prefixes, then the default.
class Tolerances {
public:
    void set_global(double tol);
    void set(const std::string& prefix, double tol);
    double get(const std::string& id, double fallback) const;
    std::optional<double> global() const { return global_; }

private:
    std::optional<double> global_;
    std::map<std::string, double> by_prefix_;
};

class Report {
public:
    explicit Report(std::string name = "") : name_(std::move(name)) {}

    // Residual check: passes iff residual is finite and below the tolerance.
    const CheckRecord& check(const std::string& id, const std::string& relation, double residual, double tolerance,
                             std::string detail = "");
    // Boolean check recorded with residual 0 (pass) or 1 (fail).
    const CheckRecord& expect(const std::string& id, const std::string& relation, bool ok, std::string detail = "");
    void note(const std::string& key, nlohmann::json value);
    void warn(const std::string& message);
    void merge(const Report& other);

    const std::string& name() const { return name_; }
    const std::vector<CheckRecord>& records() const { return records_; }
    const std::vector<std::string>& warnings() const { return warnings_; }
    bool all_pass() const;
    int failures() const;
    double worst_ratio() const;  // max residual / tolerance

    nlohmann::json to_json() const;
    // One row per check: id, relation, residual, tolerance, pass.
    std::string to_csv() const;

    // Set when a check fails and fail-fast is requested; batteries stop adding work.
    bool stop = false;
    bool fail_fast = false;

private:
    std::string name_;
    std::vector<CheckRecord> records_;
    std::vector<std::string> warnings_;
    nlohmann::json notes_ = nlohmann::json::object();
};

// Fixed 17-significant-digit formatting, independent of locale.
std::string format_double(double v);

}  // namespace xyz
