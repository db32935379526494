// entropic.hpp
// Umbrella header.

#pragma once

#include "entropic/chain.hpp"
#include "entropic/classical.hpp"
#include "entropic/distribution.hpp"
#include "entropic/errors.hpp"
#include "entropic/inequality.hpp"
#include "entropic/layout.hpp"
#include "entropic/optimizer.hpp"
#include "entropic/product_term.hpp"
#include "entropic/qsim.hpp"

namespace entropic {
inline constexpr const char* version = "0.1.0";
}
