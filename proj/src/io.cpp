#include "scatterkern/io.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>

namespace sk {

using nlohmann::json;

LoadedInput input_from_json(const json& j, const std::string& profile_name) {
    LoadedInput in;
    in.profile = GridProfile::named(profile_name.empty() ? "default" : profile_name);
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        if (g.contains("cutoff")) in.profile.cutoff = g.at("cutoff").get<double>();
        if (g.contains("panels")) in.profile.panels = g.at("panels").get<int>();
        if (g.contains("points_per_panel"))
            in.profile.points_per_panel = g.at("points_per_panel").get<int>();
        if (g.contains("basis_order")) in.profile.basis_order = g.at("basis_order").get<int>();
    }

    std::vector<MassPoint> masses;
    if (j.contains("masses"))
        for (const auto& m : j.at("masses")) {
            auto lam = m.at("lambda");
            masses.push_back(
                {cplx(lam.at(0).get<double>(), lam.at(1).get<double>()), m.at("weight").get<double>()});
        }

    const json& sp = j.at("s_plus");
    std::string kind = sp.at("kind").get<std::string>();
    if (kind == "closed-form") {
        std::map<std::string, double> params;
        if (sp.contains("params"))
            for (auto& [k, v] : sp.at("params").items()) params[k] = v.get<double>();
        in.data = make_dataset(sp.at("name").get<std::string>(), params);
        if (!masses.empty()) {
            if (!in.data.masses.empty())
                throw std::invalid_argument("input: masses given twice (closed form + list)");
            in.data.masses = masses;
            // an explicit mass list on top of a registered family invalidates
            // its reflected-side closed form
            in.data.registered_s_minus.reset();
        }
    } else if (kind == "samples") {
        std::vector<double> lam = sp.at("lambda").get<std::vector<double>>();
        std::vector<double> re = sp.at("re").get<std::vector<double>>();
        std::vector<double> im = sp.at("im").get<std::vector<double>>();
        if (re.size() != lam.size() || im.size() != lam.size())
            throw std::invalid_argument("input: sample arrays disagree in length");
        std::vector<cplx> vals(lam.size());
        for (size_t i = 0; i < lam.size(); ++i) vals[i] = cplx(re[i], im[i]);
        in.data = dataset_from_samples(j.value("label", std::string("samples")), std::move(lam),
                                       std::move(vals), masses);
    } else {
        throw std::invalid_argument("input: unknown s_plus kind '" + kind + "'");
    }
    if (j.contains("label")) in.data.label = j.at("label").get<std::string>();
    return in;
}

LoadedInput load_input(const std::string& path, const std::string& profile_name) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_input: cannot open '" + path + "'");
    json j;
    f >> j;
    return input_from_json(j, profile_name);
}

void RunManifest::write(const std::string& path) const {
    json j;
    j["command"] = command;
    j["dataset"] = dataset_label;
    j["profile_hash"] = profile_hash;
    j["outputs"] = outputs;
    j["operations"] = operations;
    json v = json::array();
    for (const auto& [name, ok] : verdicts) v.push_back({{"check", name}, {"pass", ok}});
    j["verdicts"] = v;
    std::ofstream f(path);
    f << j.dump(2) << "\n";
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("CsvWriter: cannot open '" + path + "'");
    file_ = f;
    std::string header;
    for (size_t i = 0; i < columns.size(); ++i) {
        header += columns[i];
        if (i + 1 < columns.size()) header += ",";
    }
    std::fprintf(f, "%s\n", header.c_str());
}

CsvWriter::~CsvWriter() {
    if (file_) std::fclose(static_cast<std::FILE*>(file_));
}

void CsvWriter::row(const std::vector<double>& values) {
    std::FILE* f = static_cast<std::FILE*>(file_);
    for (size_t i = 0; i < values.size(); ++i)
        std::fprintf(f, "%.17g%s", values[i], i + 1 < values.size() ? "," : "");
    std::fprintf(f, "\n");
}

} // namespace sk
