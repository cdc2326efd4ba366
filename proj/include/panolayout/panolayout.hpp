#pragma once

// Convenience umbrella header.

#include "panolayout/common.hpp"
#include "panolayout/config.hpp"
#include "panolayout/context_prior.hpp"
#include "panolayout/dataset.hpp"
#include "panolayout/detection.hpp"
#include "panolayout/estimator.hpp"
#include "panolayout/eval.hpp"
#include "panolayout/floormap.hpp"
#include "panolayout/geometry.hpp"
#include "panolayout/hog.hpp"
#include "panolayout/image.hpp"
#include "panolayout/layout_init.hpp"
#include "panolayout/model_library.hpp"
#include "panolayout/model_view.hpp"
#include "panolayout/png_io.hpp"
#include "panolayout/pose.hpp"
#include "panolayout/pose_crf.hpp"
#include "panolayout/pose_library.hpp"
#include "panolayout/posterior.hpp"
#include "panolayout/projection.hpp"
#include "panolayout/random.hpp"
#include "panolayout/renderer.hpp"
#include "panolayout/room_generator.hpp"
#include "panolayout/sampler.hpp"
#include "panolayout/scene.hpp"
#include "panolayout/trws.hpp"
