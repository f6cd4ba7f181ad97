#pragma once

#include <string>
#include <vector>

#include "physcorrect/motion_file.hpp"

namespace physcorrect {

/// Synthetic scenario fixtures with analytically known properties:
///   standing       two compliant persons at rest
///   walk-past      two persons on disjoint paths, penetration-free gait
///   static-overlap torso capsules interpenetrating 0.05 m throughout
///   dynamic-shove  person A's trajectory passes through person B
///   ground-sink    feet 0.03 m below the ground plane throughout
///   slide          feet in ground contact translating 5 mm per frame
const std::vector<std::string>& known_scenarios();
bool is_known_scenario(const std::string& name);

/// Seed-deterministic generation. Seeds vary placement and approach
/// parameters; the constructed violations (overlap depth, sink depth, slide
/// rate) stay exact. Throws SchemaError for unknown scenario names.
MotionFile synth_scenario(const std::string& name, int frames, double fps,
                          unsigned seed, const Skeleton& tmpl);

}  // namespace physcorrect
