#include "decoh/harness/report.hpp"

#include "decoh/errors.hpp"
#include "decoh/harness/io.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace decoh::harness {

std::string status_name(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        case Status::skip: return "skip";
    }
    return "?";
}

const Assertion& ValidationReport::check(Assertion a) {
    if (a.metric == "value") a.deviation = a.measured;
    else if (a.metric == "abs_diff") a.deviation = std::abs(a.measured - a.reference);
    else if (a.metric == "rel_diff") a.deviation = std::abs(a.measured - a.reference) / std::abs(a.reference);
    else if (a.metric == "ratio") a.deviation = a.measured / a.reference;
    else throw ValidationError("unknown assertion metric '" + a.metric + "'");
    const bool ok = a.strict ? a.deviation < a.tolerance : a.deviation <= a.tolerance;
    a.status = std::isfinite(a.deviation) && ok ? Status::pass : Status::fail;
    items_.push_back(std::move(a));
    return items_.back();
}

const Assertion& ValidationReport::skip(int criterion, const std::string& id, const std::string& claim,
                                        const std::string& reason) {
    Assertion a;
    a.id = id;
    a.criterion = criterion;
    a.claim = claim;
    a.status = Status::skip;
    a.detail = reason;
    a.measured = a.reference = a.deviation = a.tolerance = std::nan("");
    items_.push_back(std::move(a));
    return items_.back();
}

const Assertion& ValidationReport::error(int criterion, const std::string& id, const std::string& claim,
                                         const std::string& what) {
    Assertion a;
    a.id = id;
    a.criterion = criterion;
    a.claim = claim;
    a.status = Status::fail;
    a.detail = what;
    a.measured = a.reference = a.deviation = a.tolerance = std::nan("");
    items_.push_back(std::move(a));
    return items_.back();
}

void ValidationReport::timing(const std::string& name, int criterion, double seconds, double limit) {
    timings_.push_back({name, criterion, seconds, limit, seconds < limit});
}

void ValidationReport::note(const std::string& key, nlohmann::json value) { notes_[key] = std::move(value); }

bool ValidationReport::passed() const {
    for (const auto& a : items_)
        if (a.status == Status::fail) return false;
    for (const auto& t : timings_)
        if (!t.pass) return false;
    return true;
}

Status ValidationReport::criterion_status(int criterion) const {
    bool any = false, all_skip = true;
    for (const auto& a : items_) {
        if (a.criterion != criterion) continue;
        any = true;
        if (a.status == Status::fail) return Status::fail;
        if (a.status != Status::skip) all_skip = false;
    }
    for (const auto& t : timings_) {
        if (t.criterion != criterion) continue;
        if (!t.pass) return Status::fail;
    }
    if (!any || all_skip) return Status::skip;
    return Status::pass;
}

std::string ValidationReport::criterion_detail(int criterion) const {
    std::size_t n = 0, failed = 0, skipped = 0;
    std::string first_fail, skip_reason;
    for (const auto& a : items_) {
        if (a.criterion != criterion) continue;
        ++n;
        if (a.status == Status::fail) {
            if (!failed++) first_fail = a.id + (a.detail.empty() ? "" : " (" + a.detail + ")");
        } else if (a.status == Status::skip) {
            if (!skipped++) skip_reason = a.detail;
        }
    }
    std::ostringstream os;
    os << n << " assertions";
    if (failed) os << ", " << failed << " failed, first: " << first_fail;
    if (skipped) os << ", " << skipped << " skipped (" << skip_reason << ")";
    for (const auto& t : timings_)
        if (t.criterion == criterion && !t.pass) os << ", " << t.name << " took " << t.seconds << " s (limit " << t.limit << " s)";
    return os.str();
}

nlohmann::json ValidationReport::to_json() const {
    using nlohmann::json;
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    json list = json::array();
    for (const auto& a : items_) {
        json j;
        j["id"] = a.id;
        j["criterion"] = a.criterion;
        j["claim"] = a.claim;
        j["status"] = status_name(a.status);
        if (a.status == Status::skip) {
            j["reason"] = a.detail;
        } else {
            j["basis"] = a.basis;
            j["metric"] = a.metric;
            j["measured"] = num(a.measured);
            j["reference"] = num(a.reference);
            j["deviation"] = num(a.deviation);
            j["tolerance"] = num(a.tolerance);
            j["comparison"] = a.strict ? "<" : "<=";
            if (!a.detail.empty()) j["detail"] = a.detail;
        }
        list.push_back(std::move(j));
    }
    json criteria = json::object();
    std::map<int, bool> seen;
    for (const auto& a : items_) seen[a.criterion] = true;
    for (const auto& [c, _] : seen)
        if (c > 0) criteria[std::to_string(c)] = status_name(criterion_status(c));
    json out;
    out["passed"] = passed();
    out["criteria"] = criteria;
    out["assertions"] = list;
    out["notes"] = notes_;
    return out;
}

nlohmann::json ValidationReport::timing_json() const {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& t : timings_)
        list.push_back({{"name", t.name}, {"criterion", t.criterion}, {"seconds", t.seconds}, {"limit", t.limit},
                        {"status", t.pass ? "pass" : "fail"}});
    return {{"timings", list}};
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    std::map<int, bool> seen;
    for (const auto& a : items_) seen[a.criterion] = true;
    for (const auto& t : timings_) seen[t.criterion] = true;
    for (const auto& [c, _] : seen) {
        if (c == 0) continue;
        os << "criterion " << c << ": " << status_name(criterion_status(c)) << "  (" << criterion_detail(c) << ")\n";
    }
    for (const auto& a : items_) {
        if (a.status != Status::fail) continue;
        os << "FAIL " << a.id << ": ";
        if (std::isfinite(a.deviation))
            os << a.metric << " " << format_double(a.deviation) << (a.strict ? " !< " : " !<= ") << format_double(a.tolerance);
        if (!a.detail.empty()) os << " " << a.detail;
        os << "\n";
    }
    os << (passed() ? "all assertions passed\n" : "some assertions failed\n");
    return os.str();
}

}  // namespace decoh::harness
