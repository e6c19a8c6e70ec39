#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gatsac/nn/param_store.hpp"

namespace gatsac::nn {

// Versioned text container for named stores: shapes, row-major values (hex
// floats, exact round-trip) and Adam moments. Loading rejects any shape or
// name mismatch against the already-constructed stores.
void save_checkpoint(const std::string& path,
                     const std::vector<std::pair<std::string, const ParamStore*>>& stores);

void load_checkpoint(const std::string& path,
                     const std::vector<std::pair<std::string, ParamStore*>>& stores);

}  // namespace gatsac::nn
