#pragma once

#include <string>

namespace pdm {

// Locale-independent number formatting with a fixed count of significant
// digits ("%.*g" semantics). Non-finite values print as inf, -inf, nan.
std::string fmt_num(double v, int precision = 12);

}  // namespace pdm
