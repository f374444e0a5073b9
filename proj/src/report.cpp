#include "btstrata/report.hpp"

#include <json.hpp>

namespace btstrata::rep {

namespace {

nlohmann::json check_to_json(const CheckLine& c) {
    nlohmann::json params(nlohmann::json::value_t::object);
    for (const auto& [k, v] : c.params) params[k] = v;
    nlohmann::json j{{"check_id", c.check_id},
                     {"params", params},
                     {"status", c.status},
                     {"pass", c.pass}};
    if (!c.witness.empty()) j["witness"] = c.witness;
    return j;
}

}  // namespace

std::string report_to_json(const Report& r) {
    nlohmann::json config(nlohmann::json::value_t::object);
    for (const auto& [k, v] : r.config) config[k] = v;
    nlohmann::json checks = nlohmann::json::array();
    int64_t failed = 0;
    for (const auto& c : r.checks) {
        checks.push_back(check_to_json(c));
        if (!c.pass) ++failed;
    }
    nlohmann::json j{{"command", r.command},
                     {"config", config},
                     {"checks", checks},
                     {"summary",
                      {{"total", int64_t(r.checks.size())},
                       {"failed", failed},
                       {"pass", failed == 0}}}};
    return j.dump(2) + "\n";
}

std::string report_to_csv(const Report& r) {
    std::string out = "check_id,status,pass,params,witness\n";
    for (const auto& c : r.checks) {
        std::string params;
        for (const auto& [k, v] : c.params) {
            if (!params.empty()) params += ";";
            params += k + "=" + std::to_string(v);
        }
        out += c.check_id + "," + c.status + "," + (c.pass ? "true" : "false") + "," +
               params + "," + c.witness + "\n";
    }
    return out;
}

}  // namespace btstrata::rep
