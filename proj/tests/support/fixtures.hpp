#pragma once

#include "steinerlab/steiner_solver.hpp"

#include <vector>

namespace steinerlab::fixtures {

// Six-crossing example: four terminals on the circle of radius 2 about the
// origin and two Steiner points.
inline EmbeddedTree six_crossing_tree() {
  EmbeddedTree t;
  t.terminals = {Point{-1.937607863137521, 0.4956569062442783},
                 Point{0.49362601332867106, 1.9381262494907918},
                 Point{1.937607863137521, 0.4956569062442783},
                 Point{0.49362601332867106, -1.9381262494907916}};
  t.steiner_points = {Point{0.26533726635090726, 1.0860188945264015},
                      Point{1.0844055936219945, 0.26700927381097483}};
  t.topology = Topology{4, 2, {{0, 4}, {4, 1}, {4, 5}, {5, 2}, {5, 3}}};
  t.length = t.recompute_length();
  return t;
}

}  // namespace steinerlab::fixtures
