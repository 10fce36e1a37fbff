#include "plateau/serialize.hpp"

#include "plateau/error.hpp"

namespace plateau {

using nlohmann::json;

json norm_to_json(const NormDescriptor& n) {
    json j;
    if (std::holds_alternative<EuclideanNorm>(n.variant())) {
        j["kind"] = "euclidean";
    } else if (const auto* pn = std::get_if<PNorm>(&n.variant())) {
        j["kind"] = "pnorm";
        j["p"] = pn->p;
    } else if (const auto* pb = std::get_if<PolygonBall>(&n.variant())) {
        j["kind"] = "polygon";
        json verts = json::array();
        for (const auto& v : pb->vertices) verts.push_back({v.x(), v.y()});
        j["vertices"] = verts;
    } else {
        const auto& G = std::get<EllipseBall>(n.variant()).G;
        j["kind"] = "ellipse";
        j["g"] = {G(0, 0), G(0, 1), G(1, 1)};
    }
    return j;
}

NormDescriptor norm_from_json(const json& j) {
    const std::string kind = j.at("kind");
    if (kind == "euclidean") return NormDescriptor::euclidean();
    if (kind == "pnorm") return NormDescriptor::p_norm(j.at("p").get<double>());
    if (kind == "polygon") {
        std::vector<Vec2> verts;
        for (const auto& v : j.at("vertices")) verts.emplace_back(v[0].get<double>(), v[1].get<double>());
        return NormDescriptor::polygon(std::move(verts));
    }
    if (kind == "ellipse") {
        const auto& g = j.at("g");
        Mat2 G;
        G << g[0].get<double>(), g[1].get<double>(), g[1].get<double>(), g[2].get<double>();
        return NormDescriptor::ellipse(G);
    }
    throw ConfigError("unknown norm kind: " + kind);
}

json target_to_json(const TargetSpace& t) {
    json j;
    if (const auto* n = std::get_if<NormedPlaneTarget>(&t.variant())) {
        j["kind"] = "normed-plane";
        j["norm"] = norm_to_json(n->norm);
    } else if (const auto* e = std::get_if<EuclideanTarget>(&t.variant())) {
        j["kind"] = "euclidean";
        j["dim"] = e->dim;
    } else if (const auto* c = std::get_if<ConeTarget>(&t.variant())) {
        j["kind"] = "cone";
        j["r"] = c->r;
    } else {
        const auto* b = std::get_if<BiDiscTarget>(&t.variant());
        j["kind"] = "bi-disc";
        j["norm"] = norm_to_json(b->norm);
        j["lambda"] = b->lambda;
    }
    return j;
}

TargetSpace target_from_json(const json& j) {
    const std::string kind = j.at("kind");
    if (kind == "normed-plane") return TargetSpace::normed_plane(norm_from_json(j.at("norm")));
    if (kind == "euclidean") return TargetSpace::euclidean(j.at("dim").get<int>());
    if (kind == "cone") return TargetSpace::cone(j.at("r").get<double>());
    if (kind == "bi-disc")
        return TargetSpace::bi_disc(norm_from_json(j.at("norm")), j.at("lambda").get<double>());
    throw ConfigError("unknown target kind: " + kind);
}

std::string map_to_json(const PLMap& map) {
    json j;
    j["mesh"] = write_off(map.mesh());
    j["target"] = target_to_json(map.target());
    json images = json::array();
    const int dim = map.image_dim();
    for (int i = 0; i < map.mesh().num_vertices(); ++i) {
        json row = json::array();
        for (int k = 0; k < dim; ++k) row.push_back(map.images()[i * dim + k]);
        images.push_back(row);
    }
    j["images"] = images;
    if (!map.charts().empty()) j["charts"] = map.charts();
    return j.dump(2);
}

PLMap map_from_json(const std::string& text) {
    const json j = json::parse(text);
    auto mesh = std::make_shared<DiscMesh>(read_off(j.at("mesh").get<std::string>()));
    TargetSpace target = target_from_json(j.at("target"));
    const int dim = target.chart_dim();
    std::vector<double> images;
    images.reserve(static_cast<std::size_t>(mesh->num_vertices()) * dim);
    for (const auto& row : j.at("images"))
        for (const auto& v : row) images.push_back(v.get<double>());
    std::vector<int> charts;
    if (j.contains("charts")) charts = j.at("charts").get<std::vector<int>>();
    return PLMap(std::move(mesh), std::move(target), std::move(images), std::move(charts));
}

}  // namespace plateau
