#ifndef BTSTRATA_REPORT_HPP
#define BTSTRATA_REPORT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace btstrata::rep {

// one verification line: {check_id, params, status: exhaustive|sampled, pass,
// witness?}
struct CheckLine {
    std::string check_id;
    std::map<std::string, int64_t> params;
    std::string status = "exhaustive";
    bool pass = false;
    std::string witness;  // failure witness or informative note

    static CheckLine ok(std::string id, std::map<std::string, int64_t> p = {},
                        std::string note = "") {
        return {std::move(id), std::move(p), "exhaustive", true, std::move(note)};
    }
};

struct Report {
    std::string command;
    std::map<std::string, std::string> config;  // stringified, sorted by key
    std::vector<CheckLine> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

std::string report_to_json(const Report& r);
std::string report_to_csv(const Report& r);

}  // namespace btstrata::rep

#endif
