#pragma once

#include <string_view>

#include "sitcov/model.hpp"

namespace sitcov {

/// Raw bytes of the bundled automotive-camera model document, byte-identical
/// to data/reference_model.json (embedded at build time).
std::string_view reference_model_json();

/// The bundled model, parsed once and cached. Five factor types, 22 factors,
/// one hard constraint; every factor is tagged with the image channels.
const NoiseFactorModel& reference_model();

}  // namespace sitcov
