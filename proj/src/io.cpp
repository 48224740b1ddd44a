#include "thompson/io.hpp"

#include <fstream>

#include "thompson/errors.hpp"

namespace thompson {

namespace {

const BigInt kJsonSafe = (BigInt(1) << 53) - 1; // largest exactly-representable integer

nlohmann::json coord_to_json(const Dyadic& d) {
    nlohmann::json arr = nlohmann::json::array();
    const BigInt& m = d.numerator();
    if (m <= kJsonSafe && m >= -kJsonSafe) {
        arr.push_back(m.convert_to<long long>());
    } else {
        arr.push_back(m.str());
    }
    arr.push_back(d.exponent());
    return arr;
}

Dyadic coord_from_json(const nlohmann::json& a) {
    if (!a.is_array() || a.size() != 2) {
        throw ParseError("coordinate must be a [numerator, exponent] pair");
    }
    BigInt m;
    if (a[0].is_number_integer()) {
        m = BigInt(a[0].get<long long>());
    } else if (a[0].is_string()) {
        try {
            m = BigInt(a[0].get<std::string>());
        } catch (const std::exception&) {
            throw ParseError("numerator string is not a decimal integer");
        }
    } else {
        throw ParseError("numerator must be an integer or a decimal string");
    }
    if (!a[1].is_number_integer()) {
        throw ParseError("exponent must be an integer");
    }
    const long long k = a[1].get<long long>();
    if (k < 0 || k > 1'000'000) {
        throw ParseError("exponent out of range: " + std::to_string(k));
    }
    return Dyadic(m, static_cast<int>(k));
}

} // namespace

nlohmann::json element_to_json(const PLMap& g) {
    nlohmann::json j;
    j["version"] = 1;
    j["space"] = g.space() == Space::interval ? "interval" : "circle";
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : g.points()) {
        pts.push_back({{"x", coord_to_json(p.x)}, {"y", coord_to_json(p.y)}});
    }
    j["points"] = std::move(pts);
    return j;
}

PLMap element_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw ParseError("element file must be a JSON object");
    }
    if (!j.contains("version") || j["version"] != 1) {
        throw ParseError("unsupported element file version");
    }
    Space space;
    const std::string s = j.value("space", "");
    if (s == "interval") {
        space = Space::interval;
    } else if (s == "circle") {
        space = Space::circle_lift;
    } else {
        throw ParseError("space must be \"interval\" or \"circle\", got \"" + s + "\"");
    }
    if (!j.contains("points") || !j["points"].is_array()) {
        throw ParseError("element file needs a \"points\" array");
    }
    std::vector<DyadicPoint> pts;
    for (const auto& p : j["points"]) {
        if (!p.is_object() || !p.contains("x") || !p.contains("y")) {
            throw ParseError("each point must be an object with \"x\" and \"y\"");
        }
        pts.push_back({coord_from_json(p["x"]), coord_from_json(p["y"])});
    }
    try {
        return PLMap(space, std::move(pts));
    } catch (const Error& e) {
        throw ParseError(std::string("points do not form a valid map: ") + e.what());
    }
}

void write_element(const std::string& path, const PLMap& g) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open " + path + " for writing");
    }
    out << element_to_json(g).dump(2) << '\n';
    if (!out) {
        throw Error("failed writing " + path);
    }
}

PLMap read_element(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return element_from_json(j);
}

} // namespace thompson
