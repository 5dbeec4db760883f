#pragma once

// Input files, result emission and the run manifest.  Structured reports go
// out as JSON, traces as CSV; a manifest records enough to reproduce the run
// bit for bit (command, dataset label, profile hash, outputs, verdicts).

#include "scattering.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>
#include <vector>

namespace sk {

struct LoadedInput {
    ScatteringData data;
    GridProfile profile;
};

// schema: { "label": str,
//           "s_plus": {"kind": "closed-form", "name": str, "params": {str: num}}
//                   | {"kind": "samples", "lambda": [..], "re": [..], "im": [..]},
//           "masses": [{"lambda": [re, im], "weight": num}, ...],
//           "grid":   {"cutoff": num, "panels": int, "points_per_panel": int,
//                      "basis_order": int}            (all grid keys optional) }
LoadedInput load_input(const std::string& path, const std::string& profile_name);
LoadedInput input_from_json(const nlohmann::json& j, const std::string& profile_name);

struct RunManifest {
    std::string command;
    std::string dataset_label;
    uint64_t profile_hash = 0;
    std::vector<std::string> outputs;
    std::vector<std::string> operations;     // module operations invoked
    std::vector<std::pair<std::string, bool>> verdicts;

    bool all_pass() const {
        for (const auto& [name, ok] : verdicts)
            if (!ok) return false;
        return true;
    }
    void write(const std::string& path) const;
};

struct CsvWriter {
    explicit CsvWriter(const std::string& path, const std::vector<std::string>& columns);
    ~CsvWriter();
    void row(const std::vector<double>& values);

private:
    void* file_;
};

} // namespace sk
