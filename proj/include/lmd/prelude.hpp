#pragma once

// The bundled prelude: Int, Bool and length-indexed Vector with arithmetic
// and vector primitives. Their δ-rules live in the reduction module.

#include <string_view>

#include "lmd/syntax.hpp"

namespace lmd {

std::string_view prelude_source();
Signature prelude_signature();

}  // namespace lmd
