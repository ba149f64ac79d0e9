#include "clocksta/io.hpp"

#include <chrono>
#include <ctime>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace clocksta {

FrequencyProtocol protocol_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "finite") {
        return FrequencyProtocol::finite(j.at("omega_i").get<double>(),
                                         j.at("omega_f").get<double>(),
                                         j.at("tau").get<double>());
    }
    if (kind == "infinite") {
        return FrequencyProtocol::infinite(j.at("omega_i").get<double>(),
                                           j.at("omega_f").get<double>(),
                                           j.at("tau").get<double>(),
                                           j.value("truncation_eps", 1e-6));
    }
    if (kind == "tabulated") {
        std::vector<std::pair<double, double>> samples;
        for (const auto& s : j.at("samples"))
            samples.emplace_back(s.at(0).get<double>(), s.at(1).get<double>());
        return FrequencyProtocol::tabulated(std::move(samples));
    }
    throw std::invalid_argument("unknown protocol kind: " + kind);
}

json protocol_to_json(const FrequencyProtocol& protocol) {
    json j;
    switch (protocol.kind()) {
        case ProtocolKind::finite:
            j["kind"] = "finite";
            break;
        case ProtocolKind::infinite:
            j["kind"] = "infinite";
            j["truncation_eps"] = protocol.truncation_eps();
            break;
        case ProtocolKind::tabulated:
            j["kind"] = "tabulated";
            break;
    }
    j["omega_i"] = protocol.omega_i();
    j["omega_f"] = protocol.omega_f();
    j["tau"] = protocol.tau();
    return j;
}

FrequencyProtocol load_protocol(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open protocol file: " + path);
    json j;
    in >> j;
    return protocol_from_json(j);
}

GaussianState state_from_json(const json& j) {
    GaussianState s;
    const auto& d = j.at("d");
    s.mean = {d.at(0).get<double>(), d.at(1).get<double>()};
    const auto& V = j.at("V");
    s.cov = {V.at(0).at(0).get<double>(), V.at(0).at(1).get<double>(),
             V.at(1).at(0).get<double>(), V.at(1).at(1).get<double>()};
    s.hbar = j.value("hbar", 1.0);
    s.mass = j.value("mass", 1.0);
    if (!s.valid(1e-9))
        throw std::invalid_argument("state descriptor violates the uncertainty relation");
    return s;
}

json state_to_json(const GaussianState& state) {
    json j;
    j["d"] = {state.mean.x, state.mean.p};
    j["V"] = {{state.cov.a, state.cov.b}, {state.cov.c, state.cov.d}};
    j["hbar"] = state.hbar;
    j["mass"] = state.mass;
    return j;
}

GaussianState load_state(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open state file: " + path);
    json j;
    in >> j;
    return state_from_json(j);
}

std::vector<double> parse_grid(const std::string& spec) {
    if (spec.empty())
        throw std::invalid_argument("empty grid spec");
    const auto split = [](const std::string& s, char sep) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, sep)) parts.push_back(item);
        return parts;
    };
    if (spec.rfind("lin:", 0) == 0 || spec.rfind("log:", 0) == 0) {
        const auto parts = split(spec, ':');
        if (parts.size() != 4)
            throw std::invalid_argument("grid spec must be lin:a:b:n or log:a:b:n");
        const double a = std::stod(parts[1]);
        const double b = std::stod(parts[2]);
        const int n = std::stoi(parts[3]);
        if (n < 1)
            throw std::invalid_argument("grid spec needs n >= 1");
        std::vector<double> grid;
        grid.reserve(n);
        if (parts[0] == "lin") {
            for (int i = 0; i < n; ++i)
                grid.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
        } else {
            if (!(a > 0.0) || !(b > 0.0))
                throw std::invalid_argument("log grid needs positive endpoints");
            const double la = std::log(a), lb = std::log(b);
            for (int i = 0; i < n; ++i)
                grid.push_back(n == 1 ? a : std::exp(la + (lb - la) * i / (n - 1)));
        }
        return grid;
    }
    std::vector<double> grid;
    for (const auto& item : split(spec, ','))
        grid.push_back(std::stod(item));
    return grid;
}

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void CsvWriter::comment(const std::string& key, const std::string& value) {
    buf_ += "# " + key + "=" + value + "\n";
}

void CsvWriter::header(const std::vector<std::string>& columns) {
    columns_ = columns.size();
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += columns[i];
    }
    buf_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (columns_ != 0 && cells.size() != columns_)
        throw std::logic_error("CsvWriter: row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += cells[i];
    }
    buf_ += '\n';
}

void CsvWriter::write_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write file: " + path);
    out << buf_;
    if (!out)
        throw IoError("failed writing file: " + path);
}

std::vector<std::string> observable_columns() {
    return {"tau",  "sigma_v",     "mu_abs",       "mu_phase", "F_HS",   "P_mix", "delta_S2",
            "S_L",  "delta_E_bar", "sigma_E2_bar", "R_E",      "method", "status"};
}

std::vector<std::string> observable_cells(const ObservableReport& rep,
                                          const std::string& status) {
    return {fmt_num(rep.tau),
            fmt_num(rep.sigma_v),
            fmt_num(rep.mu_abs),
            fmt_num(rep.mu_phase),
            fmt_num(rep.F_HS),
            fmt_num(rep.P_mix),
            fmt_num(rep.delta_S2),
            fmt_num(rep.S_L),
            fmt_num(rep.delta_E_bar),
            fmt_num(rep.sigma_E2_bar),
            rep.R_E ? fmt_num(*rep.R_E) : "",
            rep.method,
            status};
}

std::vector<std::string> empty_observable_cells(double tau, double sigma_v, double mu_abs,
                                                double mu_phase, const std::string& method,
                                                const std::string& status) {
    return {fmt_num(tau), fmt_num(sigma_v), fmt_num(mu_abs), fmt_num(mu_phase),
            "",           "",               "",              "",
            "",           "",               "",              method,
            status};
}

std::string config_hash(const json& j) {
    const std::string dump = j.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : dump) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace clocksta
