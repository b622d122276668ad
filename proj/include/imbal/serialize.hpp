#pragma once

#include <span>
#include <string>
#include <variant>

#include "imbal/core.hpp"
#include "imbal/ensemble.hpp"
#include "imbal/learn.hpp"

namespace imbal {

// Flat line-oriented records: "key value..." per line, closed by "end".
// Reals use the shortest round-trip form, so save/load is lossless.

std::string to_text(const LinearModel& model);
std::string to_text(const BoostedModel& model);
std::string to_text(const MetaEnsemble& ensemble);

using AnyModel = std::variant<LinearModel, BoostedModel, MetaEnsemble>;

std::string to_text(const AnyModel& model);
AnyModel model_from_text(const std::string& text);

AnyModel load_model(const std::string& path);
void save_model(const std::string& path, const AnyModel& model);

ClassLabel predict(const AnyModel& model, std::span<const double> x);

}  // namespace imbal
