#include "driftscope/config.hpp"

#include <cmath>

#include "driftscope/error.hpp"

namespace driftscope {

std::string to_string(OutputFormat format) {
    switch (format) {
        case OutputFormat::Json: return "json";
        case OutputFormat::Csv: return "csv";
    }
    throw InternalError("unknown output format");
}

OutputFormat parse_output_format(const std::string& name) {
    if (name == "json") return OutputFormat::Json;
    if (name == "csv") return OutputFormat::Csv;
    throw ValueError("unknown output format '" + name + "' (expected json or csv)");
}

void RunConfig::validate() const {
    scheme().validate();
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw ValueError("epsilon must be >= 0");
    }
    thresholds.validate();
    if (jobs < 1) {
        throw ValueError("job count must be at least 1");
    }
    for (std::size_t i = 0; i < channels.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (channels[j] == channels[i]) {
                throw ValueError("duplicate channel selection '" + to_string(channels[i]) + "'");
            }
        }
    }
}

}  // namespace driftscope
