// Runs the full validation three times with different worker counts, prints one line per criterion
// and checks that every output except timing.json is byte-identical across the runs.

#include "decoh/errors.hpp"
#include "decoh/harness/config.hpp"
#include "decoh/harness/validate.hpp"
#include "decoh/parallel.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace decoh;
using namespace decoh::harness;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Returns the first differing file (relative path) or empty.
std::string compare_dirs(const fs::path& a, const fs::path& b, std::size_t& files) {
    std::vector<fs::path> names;
    for (const auto& e : fs::recursive_directory_iterator(a))
        if (e.is_regular_file()) names.push_back(fs::relative(e.path(), a));
    for (const auto& e : fs::recursive_directory_iterator(b))
        if (e.is_regular_file() && !fs::exists(a / fs::relative(e.path(), b))) return fs::relative(e.path(), b).string();
    std::sort(names.begin(), names.end());
    for (const auto& n : names) {
        if (n.filename() == "timing.json") continue;
        if (!fs::exists(b / n) || slurp(a / n) != slurp(b / n)) return n.string();
        ++files;
    }
    return {};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance checks"};
    std::string out = "acceptance_out";
    std::string config = std::string(DECOH_SOURCE_DIR) + "/configs/default.json";
    app.add_option("--out", out, "output directory");
    app.add_option("--config", config, "configuration file");
    CLI11_PARSE(app, argc, argv);

    try {
        const SimulationConfig cfg = load_config(config);
        const std::vector<int> workers{1, 2, 8};
        std::vector<ValidationReport> reports;
        for (int w : workers) {
            set_workers(w);
            const auto dir = (fs::path(out) / ("workers_" + std::to_string(w))).string();
            fs::remove_all(dir);
            reports.push_back(run_validate(cfg, dir));
            std::cerr << "validate with " << w << " worker(s): " << (reports.back().passed() ? "passed" : "FAILED") << "\n";
        }
        set_workers(1);

        bool ok = true;
        const ValidationReport& r = reports.front();
        for (int c = 1; c <= 9; ++c) {
            const Status s = r.criterion_status(c);
            // every criterion is expected to run on the default configuration
            const bool good = s == Status::pass;
            ok = ok && good;
            std::cout << "criterion " << c << ": " << (good ? "PASS" : "FAIL") << "  " << r.criterion_detail(c) << "\n";
        }

        std::string diff;
        std::size_t files = 0;
        for (std::size_t k = 1; k < workers.size() && diff.empty(); ++k) {
            files = 0;
            diff = compare_dirs(fs::path(out) / "workers_1", fs::path(out) / ("workers_" + std::to_string(workers[k])), files);
            if (!diff.empty()) diff += " (workers 1 vs " + std::to_string(workers[k]) + ")";
        }
        bool all_passed = true;
        for (const auto& rep : reports) all_passed = all_passed && rep.passed();
        const bool det = diff.empty() && all_passed;
        ok = ok && det;
        std::cout << "criterion 10: " << (det ? "PASS" : "FAIL") << "  ";
        if (!diff.empty())
            std::cout << "output differs: " << diff;
        else if (!all_passed)
            std::cout << "a repeated validation run failed";
        else
            std::cout << files << " files identical for 1, 2 and 8 workers";
        std::cout << "\n";
        return ok ? 0 : 1;
    } catch (const std::exception& e) {
        std::cout << "acceptance aborted: " << e.what() << "\n";
        return 1;
    }
}
