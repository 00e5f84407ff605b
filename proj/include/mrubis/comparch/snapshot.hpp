#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mrubis/comparch/architecture.hpp"

namespace mrubis::comparch {

/// Serializes the whole model (types, tenants with components, connectors,
/// runtime observations, annotations and uid counters) as indented JSON.
/// Output is stable: serialize(parseSnapshot(serialize(m))) == serialize(m).
std::string serializeSnapshot(const Architecture& model);

/// Throws ModelError on malformed documents or dangling references.
Architecture parseSnapshot(std::string_view text);

void writeSnapshot(const Architecture& model, const std::filesystem::path& path);
Architecture readSnapshot(const std::filesystem::path& path);

}  // namespace mrubis::comparch
