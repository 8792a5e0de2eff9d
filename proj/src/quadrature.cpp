#include "fermigp/quadrature.hpp"

#include <cstdlib>
#include <string>

namespace fermigp {

QuadratureSpec QuadratureSpec::defaults(int d) {
  QuadratureSpec s;
  s.points_per_axis = d == 1 ? 4096 : d == 2 ? 1024 : 192;
  return s;
}

void QuadratureSpec::validate() const {
  if (refinement_levels < 1)
    throw InputError("refinement_levels must be at least 1");
  if (refinement_levels > 20) throw InputError("refinement_levels is unreasonably large");
  if (!(rel_tol > 0)) throw InputError("rel_tol must be positive");
  const long long step = 1LL << refinement_levels;
  if (points_per_axis % step != 0)
    throw InputError("points_per_axis " + std::to_string(points_per_axis) +
                     " must be divisible by 2^refinement_levels = " + std::to_string(step));
  if (level_points(0) < 8)
    throw InputError("coarsest level has " + std::to_string(level_points(0)) +
                     " points per axis, need at least 8");
}

int worker_count() {
  if (const char* env = std::getenv("FERMIGP_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 1024) return static_cast<int>(v);
    throw InputError(std::string("FERMIGP_WORKERS must be an integer in [1, 1024], got '") +
                     env + "'");
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace fermigp
