#pragma once

#include "json.hpp"

#include "torsion/geometry.hpp"

namespace torsion {

/**
 * JSON schema:
 *
 *   {"dimension": n, "shape": SHAPE}
 *   SHAPE = {"type": "ball", "center": [..], "radius": r}
 *         | {"type": "ellipsoid", "center": [..], "semi_axes": [..], "exact_distance": bool?}
 *         | {"type": "box", "lower": [..], "upper": [..]}
 *         | {"type": "polytope", "half_spaces": [{"normal": [..], "offset": c}, ..]}
 *         | {"type": "intersection", "members": [SHAPE, ..]}
 *
 * Polytope normals that are not unit length (beyond 1e-12) are rescaled
 * together with their offsets. Inside an intersection a polytope may be an
 * unbounded polyhedron such as a single half-space.
 */
ConvexBody body_from_json(const nlohmann::json& doc);
nlohmann::json body_to_json(const ConvexBody& body);

} // namespace torsion
