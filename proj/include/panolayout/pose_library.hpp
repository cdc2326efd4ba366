#pragma once

// Library of rendered model views over the discrete pose grid, with HOG
// descriptors, plus manifest-based persistence.

#include <array>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "panolayout/common.hpp"
#include "panolayout/hog.hpp"
#include "panolayout/image.hpp"
#include "panolayout/model_library.hpp"
#include "panolayout/model_view.hpp"
#include "panolayout/png_io.hpp"
#include "panolayout/pose.hpp"

namespace panolayout {

struct PoseLibraryEntry {
  std::string model_id;
  ObjectClass cls = ObjectClass::kBed;
  int pose_index = 0;
  GrayImage image;
  HogDescriptor hog;
};

class PoseLibrary {
 public:
  int render_size() const { return render_size_; }
  const std::vector<PoseLibraryEntry>& entries() const { return entries_; }

  const std::vector<int>& entries_for_class(ObjectClass cls) const {
    return by_class_[static_cast<int>(cls)];
  }

  const PoseLibraryEntry& entry(const std::string& model_id, int pose_index) const {
    auto it = index_.find(key(model_id, pose_index));
    if (it == index_.end())
      throw ValidationError("pose library: no entry for " + model_id + " at pose " +
                            std::to_string(pose_index));
    return entries_[it->second];
  }

  // Renders every orientable model over the full yaw x pitch grid.  Models
  // without a canonical orientation (rotationally symmetric classes) get
  // pitch-only coverage at yaw 0, enough for model retrieval.
  static PoseLibrary build(const ModelLibrary& models, int render_size = 96, int jobs = 1) {
    PoseLibrary lib;
    lib.render_size_ = render_size;
    for (const ModelSpec& m : models.models()) {
      if (has_canonical_orientation(m.cls)) {
        for (int p = 0; p < PoseGrid::kLabelCount; ++p) {
          lib.entries_.push_back({m.id, m.cls, p, {}, {}});
        }
      } else {
        for (int pi = 0; pi < PoseGrid::kPitchSteps; ++pi) {
          lib.entries_.push_back({m.id, m.cls, PoseGrid::index_of(0, pi), {}, {}});
        }
      }
    }
    parallel_for(lib.entries_.size(), jobs, [&](std::size_t i) {
      PoseLibraryEntry& e = lib.entries_[i];
      e.image = render_model_view(models.get(e.model_id), PoseGrid::label_of(e.pose_index),
                                  render_size);
      e.hog = hog_descriptor(e.image);
    });
    lib.rebuild_index();
    return lib;
  }

  void save(const std::string& dir) const {
    nlohmann::json manifest = nlohmann::json::array();
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const PoseLibraryEntry& e = entries_[i];
      PoseLabel pose = PoseGrid::label_of(e.pose_index);
      std::string rel = e.model_id + "_" + std::to_string(e.pose_index) + ".png";
      write_gray_png(dir + "/" + rel, to_gray8(e.image));
      manifest.push_back({{"class", to_string(e.cls)},
                          {"model_id", e.model_id},
                          {"pose", {{"yaw", pose.yaw_deg}, {"pitch", pose.pitch_deg}}},
                          {"image_path", rel}});
    }
    std::ofstream f(dir + "/manifest.json");
    if (!f) throw IoError("cannot write pose library manifest in " + dir);
    f << manifest.dump(2) << "\n";
  }

  static PoseLibrary load(const std::string& dir) {
    std::ifstream f(dir + "/manifest.json");
    if (!f) throw IoError("cannot read pose library manifest in " + dir);
    nlohmann::json manifest;
    try {
      f >> manifest;
    } catch (const nlohmann::json::exception& e) {
      throw IoError(std::string("pose library manifest: ") + e.what());
    }
    PoseLibrary lib;
    for (const auto& row : manifest) {
      PoseLibraryEntry e;
      e.model_id = row.at("model_id").get<std::string>();
      e.cls = object_class_from_string(row.at("class").get<std::string>());
      PoseLabel pose{row.at("pose").at("yaw").get<double>(),
                     row.at("pose").at("pitch").get<double>()};
      e.pose_index = PoseGrid::quantize(pose);
      e.image = to_gray_float(read_gray_png(dir + "/" + row.at("image_path").get<std::string>()));
      e.hog = hog_descriptor(e.image);
      lib.render_size_ = e.image.width;
      lib.entries_.push_back(std::move(e));
    }
    lib.rebuild_index();
    return lib;
  }

 private:
  static std::string key(const std::string& model_id, int pose_index) {
    return model_id + "#" + std::to_string(pose_index);
  }

  void rebuild_index() {
    index_.clear();
    for (auto& v : by_class_) v.clear();
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      index_[key(entries_[i].model_id, entries_[i].pose_index)] = i;
      by_class_[static_cast<int>(entries_[i].cls)].push_back(static_cast<int>(i));
    }
  }

  int render_size_ = 96;
  std::vector<PoseLibraryEntry> entries_;
  std::map<std::string, std::size_t> index_;
  std::array<std::vector<int>, 4> by_class_;
};

}  // namespace panolayout
