#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace decoh::harness {

enum class Status { pass, fail, skip };
std::string status_name(Status s);

// One checked number. The check is always `deviation <= tolerance` (or `<` when strict), with the
// deviation derived from measured and reference according to `metric`:
//   value     deviation = measured
//   abs_diff  deviation = |measured - reference|
//   rel_diff  deviation = |measured - reference| / |reference|
//   ratio     deviation = measured / reference
struct Assertion {
    std::string id;
    int criterion = 0;      // acceptance criterion number; 0 for supporting checks
    std::string claim;      // the statement being certified
    std::string basis;      // "analytic bound", "independent oracle", "identity", "run-internal"
    std::string metric = "value";
    double measured = 0.0;
    double reference = 0.0;
    double deviation = 0.0;
    double tolerance = 0.0;
    bool strict = false;
    Status status = Status::pass;
    std::string detail;
};

struct TimingEntry {
    std::string name;
    int criterion = 0;
    double seconds = 0.0;
    double limit = 0.0;
    bool pass = true;
};

class ValidationReport {
public:
    // Evaluates the assertion from measured/reference/metric/tolerance and stores it.
    const Assertion& check(Assertion a);
    const Assertion& skip(int criterion, const std::string& id, const std::string& claim, const std::string& reason);
    // A computation that could not produce its number (exception); counts as a failure.
    const Assertion& error(int criterion, const std::string& id, const std::string& claim, const std::string& what);
    void timing(const std::string& name, int criterion, double seconds, double limit);
    void note(const std::string& key, nlohmann::json value);

    const std::vector<Assertion>& assertions() const { return items_; }
    const std::vector<TimingEntry>& timings() const { return timings_; }
    bool passed() const;
    // fail if any assertion or timing of the criterion failed, skip if all skipped, pass otherwise;
    // skip also when nothing was recorded.
    Status criterion_status(int criterion) const;
    std::string criterion_detail(int criterion) const;

    nlohmann::json to_json() const;         // deterministic content (no timings)
    nlohmann::json timing_json() const;
    std::string summary() const;

private:
    std::vector<Assertion> items_;
    std::vector<TimingEntry> timings_;
    nlohmann::json notes_ = nlohmann::json::object();
};

}  // namespace decoh::harness
