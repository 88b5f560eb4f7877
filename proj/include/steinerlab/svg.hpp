#pragma once

#include "steinerlab/io.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace steinerlab {

class UnsupportedDimension : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SvgOptions {
  double width = 640.0;
  /// Allow d > 2 by orthographic projection onto the first two axes.
  bool project = false;
};

struct SvgOutput {
  std::string svg;
  std::vector<std::string> warnings;
};

/// Terminals as filled dots (class "terminal"), branch points of degree >= 3
/// as open dots (class "branch"), one <path> per network edge, the compact
/// set and the r-tube outline dashed, energetic points as small squares.
/// Output depends only on the result and options.
SvgOutput render_svg(const ResultFile& result, const SvgOptions& options = {});

}  // namespace steinerlab
