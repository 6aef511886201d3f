// json_support.hpp — nlohmann/json glue shared by the config, scan and dataset writers (private)

#pragma once

#include <json.hpp>

#include "nhpb/scan_config.hpp"

namespace nhpb::detail {

nlohmann::ordered_json config_json(const ScanConfig& config);

} // namespace nhpb::detail
