/*
 Copyright 2026 The D2OC Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#include "d2oc/io/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <type_traits>

#include "d2oc/error.hpp"
#include "json.hpp"

namespace d2oc::io {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::Config, what); }

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(where + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed) known = known || key == a;
        if (!known) fail("unknown key " + where + "." + key);
    }
}

template <typename T>
void read(const json& obj, const char* key, const std::string& where, T& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    try {
        if constexpr (std::is_same_v<T, bool>) {
            if (!it->is_boolean()) fail(where + "." + key + " must be a boolean");
        } else if constexpr (std::is_integral_v<T>) {
            if (!it->is_number_integer()) fail(where + "." + key + " must be an integer");
            if constexpr (std::is_unsigned_v<T>) {
                if (it->is_number_unsigned() == false && it->template get<std::int64_t>() < 0) {
                    fail(where + "." + key + " must be non-negative");
                }
            }
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!it->is_number()) fail(where + "." + key + " must be a number");
        }
        out = it->template get<T>();
    } catch (const json::exception& e) {
        fail(where + "." + key + ": " + e.what());
    }
}

Point read_point(const json& value, const std::string& where) {
    if (!value.is_array() || value.size() != 2 || !value[0].is_number() || !value[1].is_number()) {
        fail(where + " must be [x, y]");
    }
    return Point(value[0].get<double>(), value[1].get<double>());
}

void read_point(const json& obj, const char* key, const std::string& where, Point& out) {
    auto it = obj.find(key);
    if (it != obj.end()) out = read_point(*it, where + "." + key);
}

json point_json(const Point& p) { return json::array({p.x(), p.y()}); }

FieldKind parse_kind(const std::string& name) {
    if (name == "constant") return FieldKind::Constant;
    if (name == "waypoint") return FieldKind::WaypointDrift;
    if (name == "vortex") return FieldKind::Vortex;
    fail("plume.field.kind must be constant, waypoint or vortex");
}

std::string_view kind_name(FieldKind kind) {
    switch (kind) {
        case FieldKind::Constant: return "constant";
        case FieldKind::WaypointDrift: return "waypoint";
        case FieldKind::Vortex: return "vortex";
    }
    return "constant";
}

void read_field(const json& obj, VelocityField& field) {
    const std::string where = "plume.field";
    check_keys(obj, where,
               {"kind", "velocity", "speed", "waypoints", "switch_radius", "per_sample", "gain",
                "center", "v_max"});
    std::string kind(kind_name(field.kind));
    read(obj, "kind", where, kind);
    field.kind = parse_kind(kind);
    read_point(obj, "velocity", where, field.constant);
    read(obj, "speed", where, field.speed);
    if (auto it = obj.find("waypoints"); it != obj.end()) {
        if (!it->is_array()) fail(where + ".waypoints must be an array");
        field.waypoints.clear();
        for (const auto& w : *it) field.waypoints.push_back(read_point(w, where + ".waypoints[]"));
    }
    read(obj, "switch_radius", where, field.switch_radius);
    read(obj, "per_sample", where, field.per_sample);
    read(obj, "gain", where, field.gain);
    read_point(obj, "center", where, field.center);
    if (auto it = obj.find("v_max"); it != obj.end() && !it->is_null()) {
        read(obj, "v_max", where, field.v_max);
    }
}

}  // namespace

RunMode parse_mode(std::string_view name) {
    if (name == "nominal") return RunMode::Nominal;
    if (name == "ff") return RunMode::Feedforward;
    if (name == "both") return RunMode::Both;
    fail("controller mode must be nominal, ff or both");
}

std::string_view to_string(RunMode mode) {
    switch (mode) {
        case RunMode::Nominal: return "nominal";
        case RunMode::Feedforward: return "ff";
        case RunMode::Both: return "both";
    }
    return "both";
}

RunConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(std::string("malformed JSON: ") + e.what());
    }
    check_keys(doc, "config", {"seed", "agents", "plume", "controller", "horizon", "weights", "output"});

    RunConfig out;
    ScenarioConfig& s = out.scenario;
    read(doc, "seed", "config", s.seed);

    if (auto it = doc.find("agents"); it != doc.end()) {
        const std::string where = "agents";
        check_keys(*it, where, {"count", "dt", "gravity", "tau", "comm_range"});
        read(*it, "count", where, s.n_agents);
        read(*it, "dt", where, s.dt);
        read(*it, "gravity", where, s.gravity);
        read(*it, "tau", where, s.tau);
        read(*it, "comm_range", where, s.comm_range);
    }
    if (auto it = doc.find("plume"); it != doc.end()) {
        const std::string where = "plume";
        check_keys(*it, where, {"samples", "domain", "mean", "sigma", "field"});
        read(*it, "samples", where, s.plume.samples);
        if (auto d = it->find("domain"); d != it->end()) {
            check_keys(*d, "plume.domain", {"lo", "hi"});
            read_point(*d, "lo", "plume.domain", s.domain.lo);
            read_point(*d, "hi", "plume.domain", s.domain.hi);
        }
        read_point(*it, "mean", where, s.plume.mean);
        read(*it, "sigma", where, s.plume.sigma);
        if (auto f = it->find("field"); f != it->end()) read_field(*f, s.plume.field);
    }
    if (auto it = doc.find("controller"); it != doc.end()) {
        const std::string where = "controller";
        check_keys(*it, where,
                   {"mode", "R", "receding", "k_nearest", "radius", "beta_min", "parallel"});
        std::string mode(to_string(s.mode));
        read(*it, "mode", where, mode);
        s.mode = parse_mode(mode);
        read(*it, "R", where, s.r_scale);
        read(*it, "receding", where, s.receding);
        read(*it, "k_nearest", where, s.k_nearest);
        read(*it, "radius", where, s.radius);
        read(*it, "beta_min", where, s.beta_min);
        read(*it, "parallel", where, s.parallel);
    }
    if (auto it = doc.find("horizon"); it != doc.end()) {
        const std::string where = "horizon";
        check_keys(*it, where, {"H", "steps"});
        read(*it, "H", where, s.horizon);
        read(*it, "steps", where, s.total_steps);
    }
    if (auto it = doc.find("weights"); it != doc.end()) {
        const std::string where = "weights";
        check_keys(*it, where, {"gamma", "sigma_c"});
        read(*it, "gamma", where, s.gamma);
        read(*it, "sigma_c", where, s.sigma_c);
    }
    if (auto it = doc.find("output"); it != doc.end()) {
        const std::string where = "output";
        check_keys(*it, where, {"snapshot_every", "settle_fraction"});
        read(*it, "snapshot_every", where, s.snapshot_every);
        read(*it, "settle_fraction", where, out.settle_fraction);
    }

    s.validate();
    if (!(out.settle_fraction > 0.0 && out.settle_fraction < 1.0)) {
        fail("invalid output.settle_fraction");
    }
    return out;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("cannot read config " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string dump_config(const RunConfig& config) {
    const ScenarioConfig& s = config.scenario;
    const VelocityField& f = s.plume.field;
    json waypoints = json::array();
    for (const auto& w : f.waypoints) waypoints.push_back(point_json(w));
    json field = {{"kind", kind_name(f.kind)},
                  {"velocity", point_json(f.constant)},
                  {"speed", f.speed},
                  {"waypoints", waypoints},
                  {"switch_radius", f.switch_radius},
                  {"per_sample", f.per_sample},
                  {"gain", f.gain},
                  {"center", point_json(f.center)}};
    field["v_max"] = std::isinf(f.v_max) ? json(nullptr) : json(f.v_max);

    json doc = {
        {"seed", s.seed},
        {"agents",
         {{"count", s.n_agents}, {"dt", s.dt}, {"gravity", s.gravity}, {"tau", s.tau},
          {"comm_range", s.comm_range}}},
        {"plume",
         {{"samples", s.plume.samples},
          {"domain", {{"lo", point_json(s.domain.lo)}, {"hi", point_json(s.domain.hi)}}},
          {"mean", point_json(s.plume.mean)},
          {"sigma", s.plume.sigma},
          {"field", field}}},
        {"controller",
         {{"mode", to_string(s.mode)}, {"R", s.r_scale}, {"receding", s.receding},
          {"k_nearest", s.k_nearest}, {"radius", s.radius}, {"beta_min", s.beta_min},
          {"parallel", s.parallel}}},
        {"horizon", {{"H", s.horizon}, {"steps", s.total_steps}}},
        {"weights", {{"gamma", s.gamma}, {"sigma_c", s.sigma_c}}},
        {"output", {{"snapshot_every", s.snapshot_every}, {"settle_fraction", config.settle_fraction}}},
    };
    return doc.dump(2) + "\n";
}

}  // namespace d2oc::io
