#ifndef STENCIL_STENCIL_HPP
#define STENCIL_STENCIL_HPP

// Umbrella header: templates that compile as-is, with /*C ... */ comment
// directives marking what a generator should vary.

#include "stencil/error.hpp"
#include "stencil/expand.hpp"
#include "stencil/lexer.hpp"
#include "stencil/records.hpp"
#include "stencil/template.hpp"

#endif  // STENCIL_STENCIL_HPP
