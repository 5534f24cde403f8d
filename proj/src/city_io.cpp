#include "uls/city_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "uls/error.hpp"

namespace uls::citygen {

using nlohmann::json;

namespace {

[[noreturn]] void format_error(const std::string& message) {
  throw Error(ErrorCode::Format, "city file: " + message);
}

}  // namespace

std::string city_to_json(const CityModel& city, int indent) {
  json doc;
  doc["side"] = city.side;
  doc["layout"] = std::string(to_string(city.layout));
  doc["params"] = {{"alpha", city.params.alpha},
                   {"beta", city.params.beta},
                   {"gamma", city.params.gamma}};
  doc["seed"] = city.seed;
  doc["city_index"] = city.city_index;
  doc["achieved_alpha"] = city.achieved_alpha;
  json buildings = json::array();
  for (const auto& b : city.buildings) {
    buildings.push_back({{"x", b.x}, {"y", b.y}, {"w", b.width},
                         {"l", b.length}, {"h", b.height}});
  }
  doc["buildings"] = std::move(buildings);
  json highways = json::array();
  for (const auto& hw : city.highways) {
    highways.push_back(
        {{"axis", hw.axis == Axis::Horizontal ? "horizontal" : "vertical"},
         {"offset", hw.offset},
         {"width", hw.width},
         {"length", hw.length}});
  }
  doc["highways"] = std::move(highways);
  return doc.dump(indent);
}

CityModel city_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    format_error(e.what());
  }
  CityModel city;
  try {
    city.side = doc.value("side", kCitySide);
    if (city.side != kCitySide) format_error("side must be 1000");
    const auto layout = parse_layout(doc.at("layout").get<std::string>());
    if (!layout) format_error("unknown layout");
    city.layout = *layout;
    const auto& p = doc.at("params");
    city.params = {p.at("alpha").get<double>(), p.at("beta").get<int>(),
                   p.at("gamma").get<double>()};
    city.seed = doc.value("seed", std::uint64_t{0});
    city.city_index = doc.value("city_index", std::uint64_t{0});
    for (const auto& b : doc.at("buildings")) {
      Building building{b.at("x").get<double>(), b.at("y").get<double>(),
                        b.at("w").get<double>(),  b.at("l").get<double>(),
                        b.at("h").get<double>(),  Shape::Square};
      if (building.width != building.length) building.shape = Shape::Rectangle;
      if (!(building.width > 0 && building.length > 0 && building.height >= 0) ||
          building.x < 0 || building.y < 0 ||
          building.x + building.width > kCitySide ||
          building.y + building.length > kCitySide) {
        format_error("building " + std::to_string(city.buildings.size()) +
                     " lies outside the city or has invalid dimensions");
      }
      city.buildings.push_back(building);
    }
    if (doc.contains("highways")) {
      for (const auto& h : doc.at("highways")) {
        const auto axis = h.at("axis").get<std::string>();
        if (axis != "horizontal" && axis != "vertical") {
          format_error("highway axis must be horizontal or vertical");
        }
        city.highways.push_back(
            {axis == "horizontal" ? Axis::Horizontal : Axis::Vertical,
             h.at("offset").get<double>(), h.at("width").get<double>(),
             h.at("length").get<double>()});
      }
    }
  } catch (const json::exception& e) {
    format_error(e.what());
  }
  validate_highways(city.highways);
  city.achieved_alpha = city.covered_area() / kCityArea;
  return city;
}

void write_city(const CityModel& city, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Format, "cannot write " + path.string());
  out << city_to_json(city, 1) << '\n';
}

CityModel read_city(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Format, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return city_from_json(buf.str());
}

}  // namespace uls::citygen
