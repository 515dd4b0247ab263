#pragma once

#include <string_view>

#include "fconc/transform.hpp"

namespace fconc {

/// Parse a transform spec string.
///
///   spec   := name [":" param ("," param)*] ["(" spec ")"]
///   param  := key "=" value
///
/// Leaf kinds: power:p, powerstar:p, logpower:alpha, halflogk:k[,normalized]
/// (halflogk also takes logk= in place of k=, for k beyond double range of
/// interest such as k = e^400). Combinators take a parenthesized base:
/// affine:A,B  reflect  rescale:lambda  restrict:lo,hi[,lo_closed,hi_closed]
/// conjexp  conjlog.
///
/// Throws PreconditionError naming the offending token.
Transform parse_transform(std::string_view spec);

}  // namespace fconc
