#include "sitcov/reference.hpp"

#include "sitcov/modelio.hpp"

namespace sitcov {

namespace detail {
extern const char* const kReferenceModelJson;
}

std::string_view reference_model_json() { return detail::kReferenceModelJson; }

const NoiseFactorModel& reference_model() {
    static const NoiseFactorModel model = parse_model(reference_model_json());
    return model;
}

}  // namespace sitcov
