#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "imbal/core.hpp"
#include "imbal/datagen.hpp"
#include "imbal/ensemble.hpp"
#include "imbal/eval.hpp"
#include "imbal/learn.hpp"
#include "imbal/log.hpp"
#include "imbal/plot.hpp"
#include "imbal/resample.hpp"
#include "imbal/serialize.hpp"

namespace py = pybind11;
using namespace imbal;

namespace {

using Matrix = py::array_t<double, py::array::c_style | py::array::forcecast>;
using Labels = py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>;

Dataset to_dataset(const Matrix& x, const Labels& y) {
  if (x.ndim() != 2) throw ParameterError("X must be a 2-D array");
  if (y.ndim() != 1 || y.shape(0) != x.shape(0)) throw ParameterError("y must be 1-D with one label per row of X");
  const auto n = static_cast<std::size_t>(x.shape(0));
  const auto d = static_cast<std::size_t>(x.shape(1));
  std::vector<double> f(x.data(), x.data() + n * d);
  std::vector<ClassLabel> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = y.data()[i];
    if (v != 0 && v != 1) throw ParameterError("labels must be 0 or 1");
    labels[i] = static_cast<ClassLabel>(v);
  }
  return Dataset(std::move(f), std::move(labels), d);
}

Dataset points_only(const Matrix& x) {
  if (x.ndim() != 2) throw ParameterError("X must be a 2-D array");
  Labels zeros(x.shape(0));
  std::fill(zeros.mutable_data(), zeros.mutable_data() + zeros.size(), 0);
  return to_dataset(x, zeros);
}

py::tuple from_dataset(const Dataset& d) {
  Matrix x({static_cast<py::ssize_t>(d.size()), static_cast<py::ssize_t>(d.dims())});
  std::copy(d.features().begin(), d.features().end(), x.mutable_data());
  Labels y(static_cast<py::ssize_t>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) y.mutable_data()[i] = static_cast<std::int64_t>(d.label(i));
  return py::make_tuple(x, y);
}

Labels predict_all(const AnyModel& m, const Matrix& x) {
  const auto d = points_only(x);
  Labels out(static_cast<py::ssize_t>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) out.mutable_data()[i] = static_cast<std::int64_t>(predict(m, d.row(i)));
  return out;
}

py::dict report_dict(const ResampleReport& r) {
  py::dict d;
  d["n_majority_before"] = r.n_majority_before;
  d["n_minority_before"] = r.n_minority_before;
  d["n_majority_after"] = r.n_majority_after;
  d["n_minority_after"] = r.n_minority_after;
  return d;
}

GenParams gen_params(std::size_t n_samples, std::array<double, 2> weights, double class_sep, std::size_t n_features,
                     std::size_t n_informative, std::size_t n_redundant, double label_noise, std::uint64_t seed) {
  GenParams g;
  g.n_samples = n_samples;
  g.weights = weights;
  g.class_sep = class_sep;
  g.n_features = n_features;
  g.n_informative = n_informative;
  g.n_redundant = n_redundant;
  g.label_noise = label_noise;
  g.seed = seed;
  return g;
}

}  // namespace

PYBIND11_MODULE(_imbal, m) {
  m.doc() = "Resampling, boosting ensembles and benchmarks for imbalanced binary data";
  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<FitError>(m, "FitError", PyExc_RuntimeError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  m.def("set_notices_enabled", &set_notices_enabled);

  m.def(
      "generate",
      [](std::size_t n_samples, std::array<double, 2> weights, double class_sep, std::size_t n_features,
         std::size_t n_informative, std::size_t n_redundant, double label_noise, std::uint64_t seed) {
        return from_dataset(generate(
            gen_params(n_samples, weights, class_sep, n_features, n_informative, n_redundant, label_noise, seed)));
      },
      py::arg("n_samples") = 10000, py::arg("weights") = std::array<double, 2>{0.1, 0.9},
      py::arg("class_sep") = 1.2, py::arg("n_features") = 5, py::arg("n_informative") = 3,
      py::arg("n_redundant") = 1, py::arg("label_noise") = 0.01, py::arg("seed") = 0,
      "Returns (X, y); weights are (minority share, majority share).");

  m.def(
      "pca_project",
      [](const Matrix& x, std::size_t k) {
        const auto d = pca_project(points_only(x), k);
        return py::cast<Matrix>(from_dataset(d)[0]);
      },
      py::arg("X"), py::arg("k") = 2);

  m.def("resample_methods", [] {
    std::vector<std::string> names;
    for (Method mt : all_methods()) names.emplace_back(method_name(mt));
    return names;
  });

  m.def(
      "resample",
      [](const Matrix& x, const Labels& y, const std::string& method, double ratio, std::size_t k,
         std::size_t k_enn, std::size_t mm, std::size_t max_iters, std::uint64_t seed) {
        ResampleParams p;
        p.ratio = ratio;
        p.k = k;
        p.k_enn = k_enn;
        p.m = mm;
        p.max_iters = max_iters;
        p.seed = seed;
        const auto r = resample(to_dataset(x, y), parse_method(method), p);
        auto xy = from_dataset(r.data);
        return py::make_tuple(xy[0], xy[1], report_dict(r.report));
      },
      py::arg("X"), py::arg("y"), py::arg("method"), py::arg("ratio") = 0.5, py::arg("k") = 0,
      py::arg("k_enn") = 5, py::arg("m") = 10, py::arg("max_iters") = 100, py::arg("seed") = 0,
      "Returns (X, y, report). k=0 picks the method default.");

  py::class_<LinearModel>(m, "LinearModel")
      .def_readonly("theta", &LinearModel::theta)
      .def_readonly("mean", &LinearModel::mean)
      .def_readonly("scale", &LinearModel::scale)
      .def_readonly("strength", &LinearModel::strength)
      .def_property_readonly("penalty", [](const LinearModel& lm) { return std::string(penalty_name(lm.penalty)); })
      .def("predict", [](const LinearModel& lm, const Matrix& x) { return predict_all(lm, x); })
      .def("scores",
           [](const LinearModel& lm, const Matrix& x) { return predict_logistic(lm, points_only(x)).scores; })
      .def("to_text", [](const LinearModel& lm) { return to_text(lm); });

  py::class_<BoostedModel>(m, "BoostedModel")
      .def_readonly("alphas", &BoostedModel::alphas)
      .def_readwrite("threshold_b", &BoostedModel::threshold_b)
      .def_property_readonly("n_stumps", [](const BoostedModel& b) { return b.stumps.size(); })
      .def("predict", [](const BoostedModel& b, const Matrix& x) { return predict_all(b, x); })
      .def("scores",
           [](const BoostedModel& b, const Matrix& x) {
             const auto d = points_only(x);
             std::vector<double> s(d.size());
             for (std::size_t i = 0; i < d.size(); ++i) s[i] = boosted_score(b, d.row(i));
             return s;
           })
      .def("to_text", [](const BoostedModel& b) { return to_text(b); });

  py::class_<MetaEnsemble>(m, "MetaEnsemble")
      .def_readonly("members", &MetaEnsemble::members)
      .def("predict", [](const MetaEnsemble& e, const Matrix& x) { return predict_all(e, x); })
      .def("to_text", [](const MetaEnsemble& e) { return to_text(e); });

  m.def(
      "fit_logistic",
      [](const Matrix& x, const Labels& y, const std::string& penalty, double strength, bool balanced, double tol,
         std::size_t max_iters) {
        const auto d = to_dataset(x, y);
        FitOptions o;
        o.penalty = parse_penalty(penalty);
        o.strength = strength;
        if (balanced) o.class_weights = balanced_weights(d);
        o.tol = tol;
        o.max_iters = max_iters;
        return fit_logistic(d, o);
      },
      py::arg("X"), py::arg("y"), py::arg("penalty") = "l2", py::arg("strength") = 1.0,
      py::arg("balanced") = false, py::arg("tol") = 1e-8, py::arg("max_iters") = 1000);

  m.def(
      "fit_adaboost",
      [](const Matrix& x, const Labels& y, std::size_t rounds) { return fit_adaboost(to_dataset(x, y), rounds, 0); },
      py::arg("X"), py::arg("y"), py::arg("rounds") = 10);

  m.def(
      "easy_ensemble",
      [](const Matrix& x, const Labels& y, std::size_t n_members, std::size_t rounds, std::uint64_t seed) {
        return easy_ensemble(to_dataset(x, y), EnsembleOptions{n_members, rounds, seed});
      },
      py::arg("X"), py::arg("y"), py::arg("n_members") = 10, py::arg("rounds") = 10, py::arg("seed") = 0);

  m.def(
      "balance_cascade",
      [](const Matrix& x, const Labels& y, std::size_t n_members, std::size_t rounds, std::uint64_t seed) {
        return balance_cascade(to_dataset(x, y), EnsembleOptions{n_members, rounds, seed});
      },
      py::arg("X"), py::arg("y"), py::arg("n_members") = 4, py::arg("rounds") = 10, py::arg("seed") = 0);

  m.def(
      "metrics",
      [](const Labels& truth, const Labels& pred) {
        if (truth.ndim() != 1 || pred.ndim() != 1 || truth.shape(0) != pred.shape(0))
          throw ParameterError("truth and predictions must be 1-D and equally long");
        std::vector<ClassLabel> t, p;
        for (py::ssize_t i = 0; i < truth.shape(0); ++i) {
          t.push_back(truth.data()[i] ? ClassLabel::Minority : ClassLabel::Majority);
          p.push_back(pred.data()[i] ? ClassLabel::Minority : ClassLabel::Majority);
        }
        const auto cm = confusion(t, p);
        const auto em = metrics(cm);
        py::dict d;
        d["precision_majority"] = em.precision_majority;
        d["recall_minority"] = em.recall_minority;
        d["tp_minority"] = cm.tp_minority;
        d["fn_minority"] = cm.fn_minority;
        d["tp_majority"] = cm.tp_majority;
        d["fn_majority"] = cm.fn_majority;
        return d;
      },
      py::arg("y_true"), py::arg("y_pred"));

  m.def("benchmark_methods", &benchmark_methods);

  m.def(
      "run_benchmark",
      [](const std::vector<std::string>& methods, std::uint64_t seed, std::size_t n_samples,
         std::array<double, 2> weights, double class_sep, double label_noise) {
        auto g = gen_params(n_samples, weights, class_sep, 5, 3, 1, label_noise, 0);
        std::vector<BenchmarkRow> rows;
        {
          py::gil_scoped_release release;
          rows = run_benchmark(g, SplitSpec{}, methods, seed);
        }
        py::list out;
        for (const auto& r : rows) {
          py::dict d;
          d["method"] = r.method;
          d["precision_majority"] = r.precision_majority;
          d["recall_minority"] = r.recall_minority;
          d["n_majority_after"] = r.n_majority_after;
          d["n_minority_after"] = r.n_minority_after;
          d["seed"] = r.seed;
          d["test_hash"] = r.test_hash;
          d["error"] = r.error;
          out.append(d);
        }
        return out;
      },
      py::arg("methods") = benchmark_methods(), py::arg("seed") = 0, py::arg("n_samples") = 10000,
      py::arg("weights") = std::array<double, 2>{0.1, 0.9}, py::arg("class_sep") = 1.2,
      py::arg("label_noise") = 0.01);

  m.def("model_from_text", [](const std::string& text) -> py::object {
    return std::visit([](auto&& mdl) { return py::cast(mdl); }, model_from_text(text));
  });

  m.def(
      "render_plot",
      [](const Matrix& x, const Labels& y, py::object model, std::size_t grid_res) {
        std::optional<AnyModel> mdl;
        if (!model.is_none()) {
          if (py::isinstance<LinearModel>(model)) mdl = model.cast<LinearModel>();
          else if (py::isinstance<BoostedModel>(model)) mdl = model.cast<BoostedModel>();
          else mdl = model.cast<MetaEnsemble>();
        }
        return render_plot(to_dataset(x, y), mdl, grid_res);
      },
      py::arg("X"), py::arg("y"), py::arg("model") = py::none(), py::arg("grid_res") = 100);
}
