#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "clocksta/gaussian.hpp"
#include "clocksta/protocol.hpp"
#include "clocksta/report.hpp"

namespace clocksta {

using json = nlohmann::json;

inline constexpr const char* kCodeVersion = "1.0.0";

// File-system failures, distinguished for the CLI exit-code contract.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// {"kind": "finite"|"infinite"|"tabulated", "omega_i": f, "omega_f": f, "tau": f,
//  "truncation_eps": f (infinite only), "samples": [[t, w2], ...] (tabulated only)}
FrequencyProtocol protocol_from_json(const json& j);
json protocol_to_json(const FrequencyProtocol& protocol);
FrequencyProtocol load_protocol(const std::string& path);

// {"d": [x, p], "V": [[..],[..]], "hbar": f (optional), "mass": f (optional)}
GaussianState state_from_json(const json& j);
json state_to_json(const GaussianState& state);
GaussianState load_state(const std::string& path);

// Grid specs: "lin:a:b:n", "log:a:b:n", a comma list, or a single value.
std::vector<double> parse_grid(const std::string& spec);

// Deterministic float formatting shared by all CSV output.
std::string fmt_num(double v);

// CSV with leading '# key=value' comment lines; cells are preformatted strings.
class CsvWriter {
public:
    void comment(const std::string& key, const std::string& value);
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<std::string>& cells);
    const std::string& str() const { return buf_; }
    void write_file(const std::string& path) const;

private:
    std::string buf_;
    std::size_t columns_ = 0;
};

std::vector<std::string> observable_columns();
std::vector<std::string> observable_cells(const ObservableReport& rep,
                                          const std::string& status);
std::vector<std::string> empty_observable_cells(double tau, double sigma_v, double mu_abs,
                                                double mu_phase, const std::string& method,
                                                const std::string& status);

// FNV-1a over the canonical dump, hex-encoded.
std::string config_hash(const json& j);

std::string utc_timestamp();

}  // namespace clocksta
