#pragma once

#include "steinerlab/mdm.hpp"

#include <vector>

namespace steinerlab::detail {

struct DefectPeak {
  Point point;
  double defect;
};

// Local maxima of dist(m, net) - r along the boundary, each refined by
// golden section between its neighbouring samples. Point sets return every
// point.
std::vector<DefectPeak> defect_peaks(const MdmNetwork& net, const CompactSetDescriptor& desc,
                                     double r, std::size_t density);

}  // namespace steinerlab::detail
