#include "torsion/body_json.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "shape_data.hpp"

namespace torsion {

namespace {

using nlohmann::json;

Point point_field(const json& j, const char* key, int n)
{
    if (!j.contains(key) || !j.at(key).is_array())
        throw std::invalid_argument(std::string("missing array field '") + key + "'");
    Point p = j.at(key).get<Point>();
    if (static_cast<int>(p.size()) != n)
        throw std::invalid_argument(std::string("field '") + key + "' has wrong dimension");
    return p;
}

std::vector<HalfSpace> half_spaces_field(const json& j, int n)
{
    if (!j.contains("half_spaces") || !j.at("half_spaces").is_array())
        throw std::invalid_argument("polytope needs a 'half_spaces' array");
    std::vector<HalfSpace> hs;
    for (const auto& h : j.at("half_spaces")) {
        HalfSpace s;
        s.normal = point_field(h, "normal", n);
        s.offset = h.at("offset").get<double>();
        double norm2 = 0.0;
        for (double v : s.normal)
            norm2 += v * v;
        const double norm = std::sqrt(norm2);
        if (!(norm > 0.0))
            throw std::invalid_argument("half-space normal is zero");
        if (std::abs(norm - 1.0) > 1e-12) {
            for (double& v : s.normal)
                v /= norm;
            s.offset /= norm;
        }
        hs.push_back(std::move(s));
    }
    return hs;
}

ConvexBody shape_from_json(const json& s, int n, bool member)
{
    const std::string type = s.at("type").get<std::string>();
    if (type == "ball")
        return ConvexBody::ball(point_field(s, "center", n), s.at("radius").get<double>());
    if (type == "ellipsoid")
        return ConvexBody::ellipsoid(point_field(s, "center", n), point_field(s, "semi_axes", n),
                                     s.value("exact_distance", false));
    if (type == "box")
        return ConvexBody::box(point_field(s, "lower", n), point_field(s, "upper", n));
    if (type == "polytope")
        return member ? ConvexBody::polyhedron(n, half_spaces_field(s, n))
                      : ConvexBody::polytope(n, half_spaces_field(s, n));
    if (type == "intersection") {
        if (member)
            throw std::invalid_argument("nested intersections are not supported");
        std::vector<ConvexBody> members;
        for (const auto& m : s.at("members"))
            members.push_back(shape_from_json(m, n, true));
        return ConvexBody::intersection(std::move(members));
    }
    throw std::invalid_argument("unknown shape type '" + type + "'");
}

json shape_to_json(const ConvexBody& body)
{
    const auto& shape = body.shape();
    if (const auto* b = std::get_if<Ball>(&shape))
        return {{"type", "ball"}, {"center", b->center}, {"radius", b->radius}};
    if (const auto* e = std::get_if<Ellipsoid>(&shape)) {
        json j = {{"type", "ellipsoid"}, {"center", e->center}, {"semi_axes", e->semi_axes}};
        if (e->exact_distance)
            j["exact_distance"] = true;
        return j;
    }
    if (const auto* b = std::get_if<Box>(&shape))
        return {{"type", "box"}, {"lower", b->lower}, {"upper", b->upper}};
    if (const auto* p = std::get_if<Polytope>(&shape)) {
        json hs = json::array();
        for (const auto& h : p->half_spaces())
            hs.push_back({{"normal", h.normal}, {"offset", h.offset}});
        return {{"type", "polytope"}, {"half_spaces", hs}};
    }
    const auto& s = std::get<Intersection>(shape);
    json members = json::array();
    for (const auto& m : s.members())
        members.push_back(shape_to_json(m));
    return {{"type", "intersection"}, {"members", members}};
}

} // namespace

ConvexBody body_from_json(const json& doc)
{
    try {
        const int n = doc.at("dimension").get<int>();
        if (n < 2)
            throw std::invalid_argument("dimension must be >= 2");
        return shape_from_json(doc.at("shape"), n, false);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed body JSON: ") + e.what());
    }
}

json body_to_json(const ConvexBody& body)
{
    return {{"dimension", body.dimension()}, {"shape", shape_to_json(body)}};
}

} // namespace torsion
