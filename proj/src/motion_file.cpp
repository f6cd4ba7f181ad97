#include "physcorrect/motion_file.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

#ifndef PHYSCORRECT_DEFAULT_TEMPLATE
#define PHYSCORRECT_DEFAULT_TEMPLATE "data/skeleton_template.json"
#endif

namespace physcorrect {

namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw SchemaError("cannot open " + path);
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("malformed JSON in " + path + ": " + e.what());
  }
}

void require_keys(const json& obj, std::initializer_list<const char*> keys,
                  const std::string& where) {
  if (!obj.is_object()) {
    throw SchemaError(where + " must be an object");
  }
  for (const char* k : keys) {
    if (!obj.contains(k)) {
      throw SchemaError(where + " is missing key \"" + k + "\"");
    }
  }
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : keys) {
      if (item.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw SchemaError(where + " has unknown key \"" + item.key() + "\"");
    }
  }
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) {
    throw SchemaError(where + " must be a number");
  }
  const double x = v.get<double>();
  if (!std::isfinite(x)) {
    throw SchemaError(where + " must be finite");
  }
  return x;
}

Vec3 as_vec3(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 3) {
    throw SchemaError(where + " must be an array of 3 numbers");
  }
  return Vec3(as_number(v[0], where), as_number(v[1], where),
              as_number(v[2], where));
}

Skeleton parse_skeleton_block(const json& block, const std::string& where) {
  require_keys(block, {"joints"}, where);
  const json& joints = block["joints"];
  if (!joints.is_array()) {
    throw SchemaError(where + ".joints must be an array");
  }
  Skeleton s;
  for (size_t j = 0; j < joints.size(); ++j) {
    const std::string jw = where + ".joints[" + std::to_string(j) + "]";
    require_keys(joints[j], {"name", "parent", "offset", "radius"}, jw);
    Joint joint;
    if (!joints[j]["name"].is_string()) {
      throw SchemaError(jw + ".name must be a string");
    }
    joint.name = joints[j]["name"].get<std::string>();
    const json& parent = joints[j]["parent"];
    if (parent.is_null()) {
      joint.parent = -1;
    } else if (parent.is_number_integer()) {
      joint.parent = parent.get<int>();
    } else {
      throw SchemaError(jw + ".parent must be an integer or null");
    }
    joint.offset = as_vec3(joints[j]["offset"], jw + ".offset");
    joint.radius = as_number(joints[j]["radius"], jw + ".radius");
    s.joints.push_back(joint);
  }
  recompute_mass(s);
  validate_skeleton(s);
  return s;
}

std::string escape_json(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out.push_back('\\');
    }
    out.push_back(c);
  }
  return out;
}

void append_vec3(std::string& out, const Vec3& v) {
  out += "[" + format_double(v.x()) + ", " + format_double(v.y()) + ", " +
         format_double(v.z()) + "]";
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

MotionFile load_motion_file(const std::string& path) {
  const json doc = parse_file(path);
  require_keys(doc, {"version", "fps", "skeleton_template", "persons"}, path);
  MotionFile mf;
  if (!doc["version"].is_number_integer()) {
    throw SchemaError(path + ": version must be an integer");
  }
  mf.version = doc["version"].get<int>();
  if (mf.version != kMotionFileVersion) {
    throw SchemaError(path + ": unrecognized version " +
                      std::to_string(mf.version));
  }
  mf.sequence.fps = as_number(doc["fps"], path + ".fps");
  mf.skeleton_template =
      parse_skeleton_block(doc["skeleton_template"], path + ".skeleton_template");

  const json& persons = doc["persons"];
  if (!persons.is_array() || persons.empty()) {
    throw SchemaError(path + ".persons must be a non-empty array");
  }
  for (size_t p = 0; p < persons.size(); ++p) {
    const std::string pw = path + ".persons[" + std::to_string(p) + "]";
    require_keys(persons[p], {"shape", "frames"}, pw);
    Person person;
    const json& shape = persons[p]["shape"];
    if (!shape.is_array() || static_cast<int>(shape.size()) != kShapeDim) {
      throw SchemaError(pw + ".shape must have " + std::to_string(kShapeDim) +
                        " coefficients");
    }
    for (int i = 0; i < kShapeDim; ++i) {
      person.shape.beta[i] = as_number(shape[i], pw + ".shape");
    }
    person.shape = person.shape.clamped();

    const json& frames = persons[p]["frames"];
    if (!frames.is_array()) {
      throw SchemaError(pw + ".frames must be an array");
    }
    for (size_t t = 0; t < frames.size(); ++t) {
      const std::string fw = pw + ".frames[" + std::to_string(t) + "]";
      require_keys(frames[t], {"root_orient", "body_pose", "root_trans"}, fw);
      PoseParams pose;
      pose.root_orient = as_vec3(frames[t]["root_orient"], fw + ".root_orient");
      pose.root_trans = as_vec3(frames[t]["root_trans"], fw + ".root_trans");
      const json& body = frames[t]["body_pose"];
      if (!body.is_array() ||
          static_cast<int>(body.size()) != 3 * kNumBodyJoints) {
        throw SchemaError(fw + ".body_pose must have " +
                          std::to_string(3 * kNumBodyJoints) + " numbers");
      }
      for (int j = 0; j < kNumBodyJoints; ++j) {
        pose.body_pose[j] =
            Vec3(as_number(body[3 * j], fw), as_number(body[3 * j + 1], fw),
                 as_number(body[3 * j + 2], fw));
      }
      person.frames.push_back(pose.canonicalized());
    }
    mf.sequence.persons.push_back(std::move(person));
  }
  validate_sequence(mf.sequence);
  return mf;
}

std::string motion_file_to_string(const MotionFile& mf) {
  validate_skeleton(mf.skeleton_template);
  validate_sequence(mf.sequence);
  std::string out;
  out.reserve(1 << 20);
  out += "{\n\"version\": " + std::to_string(mf.version) + ",\n";
  out += "\"fps\": " + format_double(mf.sequence.fps) + ",\n";
  out += "\"skeleton_template\": {\n\"joints\": [\n";
  for (size_t j = 0; j < mf.skeleton_template.joints.size(); ++j) {
    const Joint& joint = mf.skeleton_template.joints[j];
    out += "{\"name\": \"" + escape_json(joint.name) +
           "\", \"parent\": " + std::to_string(joint.parent) +
           ", \"offset\": ";
    append_vec3(out, joint.offset);
    out += ", \"radius\": " + format_double(joint.radius) + "}";
    out += j + 1 < mf.skeleton_template.joints.size() ? ",\n" : "\n";
  }
  out += "]\n},\n\"persons\": [\n";
  for (size_t p = 0; p < mf.sequence.persons.size(); ++p) {
    const Person& person = mf.sequence.persons[p];
    out += "{\n\"shape\": [";
    for (int i = 0; i < kShapeDim; ++i) {
      out += format_double(person.shape.beta[i]);
      if (i + 1 < kShapeDim) {
        out += ", ";
      }
    }
    out += "],\n\"frames\": [\n";
    for (size_t t = 0; t < person.frames.size(); ++t) {
      const PoseParams& f = person.frames[t];
      out += "{\"root_orient\": ";
      append_vec3(out, f.root_orient);
      out += ", \"body_pose\": [";
      for (int j = 0; j < kNumBodyJoints; ++j) {
        const Vec3& v = f.body_pose[j];
        out += format_double(v.x()) + ", " + format_double(v.y()) + ", " +
               format_double(v.z());
        if (j + 1 < kNumBodyJoints) {
          out += ", ";
        }
      }
      out += "], \"root_trans\": ";
      append_vec3(out, f.root_trans);
      out += "}";
      out += t + 1 < person.frames.size() ? ",\n" : "\n";
    }
    out += "]\n}";
    out += p + 1 < mf.sequence.persons.size() ? ",\n" : "\n";
  }
  out += "]\n}\n";
  return out;
}

void save_motion_file(const std::string& path, const MotionFile& mf) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw SchemaError("cannot write " + path);
  }
  out << motion_file_to_string(mf);
}

Skeleton load_template_file(const std::string& path) {
  const json doc = parse_file(path);
  require_keys(doc, {"version", "joints"}, path);
  if (!doc["version"].is_number_integer() ||
      doc["version"].get<int>() != kMotionFileVersion) {
    throw SchemaError(path + ": unrecognized template version");
  }
  json block;
  block["joints"] = doc["joints"];
  return parse_skeleton_block(block, path);
}

std::string default_template_path() {
  if (const char* env = std::getenv("PHYSCORRECT_TEMPLATE")) {
    if (env[0] != '\0') {
      return env;
    }
  }
  return PHYSCORRECT_DEFAULT_TEMPLATE;
}

RunConfig load_run_config(const std::string& path) {
  const json doc = parse_file(path);
  RunConfig cfg;
  cfg.correction.fps = 0.0;  // 0 = take the motion file's frame rate
  if (!doc.is_object()) {
    throw SchemaError(path + " must be a JSON object");
  }
  for (const auto& item : doc.items()) {
    const std::string& key = item.key();
    const json& v = item.value();
    if (key == "loop_n") {
      cfg.correction.loop_n = static_cast<int>(as_number(v, key));
    } else if (key == "substeps") {
      cfg.correction.substeps = static_cast<int>(as_number(v, key));
    } else if (key == "fps") {
      cfg.correction.fps = as_number(v, key);
    } else if (key == "pen_tol") {
      cfg.correction.pen_tol = as_number(v, key);
    } else if (key == "diagnostics") {
      if (!v.is_boolean()) {
        throw SchemaError("diagnostics must be a boolean");
      }
      cfg.correction.diagnostics = v.get<bool>();
    } else if (key == "divergence_policy") {
      const std::string policy = v.is_string() ? v.get<std::string>() : "";
      if (policy == "abort") {
        cfg.correction.policy = DivergencePolicy::kAbort;
      } else if (policy == "reset-to-reference") {
        cfg.correction.policy = DivergencePolicy::kResetToReference;
      } else {
        throw SchemaError(
            "divergence_policy must be \"abort\" or \"reset-to-reference\"");
      }
    } else if (key == "ground_height") {
      cfg.correction.ground_height = as_number(v, key);
    } else if (key == "armature") {
      cfg.correction.armature = as_number(v, key);
    } else if (key == "solver_iterations") {
      cfg.correction.solver_iterations = static_cast<int>(as_number(v, key));
    } else if (key == "friction_mu") {
      cfg.correction.friction_mu = as_number(v, key);
    } else if (key == "frame_time_budget_ms") {
      cfg.correction.frame_time_budget_ms = as_number(v, key);
    } else if (key == "h_thresh") {
      cfg.h_thresh = as_number(v, key);
    } else if (key == "template") {
      if (!v.is_string()) {
        throw SchemaError("template must be a string path");
      }
      cfg.template_path = v.get<std::string>();
    } else if (key == "gains") {
      require_keys(v,
                   {"kp", "kd", "torque_limit", "root_kp", "root_kd", "f_max",
                    "root_rot_kp", "root_rot_kd", "root_torque_max"},
                   "gains");
      ControllerGains& g = cfg.correction.gains;
      auto triple = [&](const char* name, std::array<double, 3>& dst) {
        const json& arr = v[name];
        if (!arr.is_array() || arr.size() != 3) {
          throw SchemaError(std::string("gains.") + name +
                            " must be an array of 3 numbers");
        }
        for (int i = 0; i < 3; ++i) {
          dst[i] = as_number(arr[i], name);
        }
      };
      triple("kp", g.kp);
      triple("kd", g.kd);
      triple("torque_limit", g.torque_limit);
      g.root_kp = as_number(v["root_kp"], "gains.root_kp");
      g.root_kd = as_number(v["root_kd"], "gains.root_kd");
      g.f_max = as_number(v["f_max"], "gains.f_max");
      g.root_rot_kp = as_number(v["root_rot_kp"], "gains.root_rot_kp");
      g.root_rot_kd = as_number(v["root_rot_kd"], "gains.root_rot_kd");
      g.root_torque_max =
          as_number(v["root_torque_max"], "gains.root_torque_max");
      for (int i = 0; i < 3; ++i) {
        if (g.kp[i] < 0.0 || g.kd[i] < 0.0 || !(g.torque_limit[i] > 0.0)) {
          throw SchemaError("gains must satisfy kp, kd >= 0, torque_limit > 0");
        }
      }
    } else {
      throw SchemaError(path + " has unknown key \"" + key + "\"");
    }
  }
  CorrectionConfig check = cfg.correction;
  if (check.fps == 0.0) {
    check.fps = 30.0;  // placeholder; the real rate resolves at run time
  }
  validate_config(check);
  if (!(cfg.h_thresh >= 0.0)) {
    throw SchemaError("h_thresh must be >= 0");
  }
  return cfg;
}

}  // namespace physcorrect
