#pragma once

#include <filesystem>
#include <string>

#include "uls/citygen.hpp"

namespace uls::citygen {

// City export: {side, layout, params, seed, city_index, achieved_alpha,
// buildings[{x,y,w,l,h}], highways[{axis,offset,width,length}]}. Doubles
// are written in shortest round-trip form.
std::string city_to_json(const CityModel& city, int indent = -1);
CityModel city_from_json(const std::string& text);

void write_city(const CityModel& city, const std::filesystem::path& path);
CityModel read_city(const std::filesystem::path& path);

}  // namespace uls::citygen
