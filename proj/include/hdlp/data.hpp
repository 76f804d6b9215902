#pragma once

#include "hdlp/core.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace hdlp {

enum class SpeedClass { none, slow, fast };

SpeedClass parse_speed_class(std::string_view text);
std::string_view to_string(SpeedClass speed);

/// Tabular time series sharing one time index. Missing values are NaN and
/// may only appear as leading or trailing runs (see Dataset::validate).
struct Dataset {
  std::vector<std::string> names;
  Matrix values;  // rows = time, cols = series
  std::vector<int> transform_codes;
  std::vector<SpeedClass> speed;
  std::vector<std::string> time_index;

  Index rows() const { return values.rows(); }
  Index cols() const { return values.cols(); }

  /// Column of a series; throws ConfigError for an unknown id.
  Index column(std::string_view name) const;
  bool has(std::string_view name) const;

  /// Checks shapes, transform codes in 1..6 and the absence of internal gaps.
  void validate() const;

  /// Builds a dataset from a raw matrix; codes default to 1, speed to none.
  static Dataset from_matrix(Matrix values, std::vector<std::string> names);
};

/// Transformation codes 1..6: level, first difference, second difference,
/// log, log difference, second log difference. Leading entries that are
/// undefined under the code come back as NaN.
Vector apply_transform(const Vector& series, int code, std::string_view name = {});

/// Applies every series' transform code; codes are reset to 1 afterwards
/// so the result is idempotent under a second call.
Dataset apply_transforms(const Dataset& raw);

struct Demeaned {
  Matrix values;
  Vector means;
};

Demeaned demean(const Matrix& m);

/// Local projection specification.
struct LpSpec {
  std::string response;
  std::string shock;
  std::vector<std::string> slow_controls;
  std::vector<std::string> fast_controls;
  int lags = 1;
  int h_max = 0;
  /// Indicator series whose value at t-1 selects the state of row t.
  /// One id gives the two states {I, 1-I}; several ids must partition
  /// unity unless `cross_states` asks for all of their products.
  std::vector<std::string> state_dummies;
  bool cross_states = false;
  std::vector<std::string> state_labels;
  bool cumulate = false;
  double alpha = 0.05;
  /// Report the h = 0 self response as exactly 1 when response == shock.
  bool fix_impact = false;

  /// Throws ConfigError when the spec does not fit the dataset.
  void validate(const Dataset& data) const;
  /// Series entering z_t = (x_s', x, y, x_f')', duplicates removed.
  std::vector<std::string> z_variables() const;
  /// Slow controls with the response and shock removed.
  std::vector<std::string> effective_slow() const;
  std::vector<std::string> effective_fast() const;
};

/// Regression problem with the unpenalized columns ordered first.
struct PenalizedProblem {
  Matrix X;
  Vector y;
  Index n_unpenalized = 0;
  /// Unpenalized columns that inference is reported for. Defaults to all of
  /// them; state intercepts are unpenalized but not of interest.
  IndexList of_interest;
  std::vector<std::string> column_labels;
  /// Dataset row of the regressors in each observation (the "t" of y_{t+h}).
  std::vector<Index> rows;
  /// Names of the states kept by interact_states; empty for linear designs.
  std::vector<std::string> states;
  std::vector<std::string> dropped_states;
  Warnings warnings;

  Index T() const { return X.rows(); }
  Index N() const { return X.cols(); }
  Index S() const { return n_unpenalized; }

  /// Problem over the same columns restricted to observations [0, count).
  PenalizedProblem head_rows(Index count) const;
  void check_shapes() const;
};

/// Design of the horizon-h local projection. `data` must already be
/// transformed; rows with any missing entry are trimmed and every column
/// (and y) is demeaned.
PenalizedProblem build_lp_design(const Dataset& data, const LpSpec& spec, int h);

/// State indicators aligned to problem.rows (value at t-1 for row t).
std::vector<Vector> state_dummies_for(const Dataset& data, const LpSpec& spec,
                                      const std::vector<Index>& rows);

/// All 2^m products of m indicators; for two indicators U, R the order is
/// UR, U(1-R), (1-U)R, (1-U)(1-R).
std::vector<Vector> cross_indicators(const std::vector<Vector>& indicators);

/// Replaces each column by its state interactions, adds intercept dummies
/// for all states but the last (the demeaning constant covers the last) and
/// re-demeans. States with fewer than `min_state_obs` active rows are
/// dropped together with their rows and recorded in dropped_states.
PenalizedProblem interact_states(const PenalizedProblem& problem,
                                 const std::vector<Vector>& dummies,
                                 const std::vector<std::string>& labels = {},
                                 Index min_state_obs = 5);

}  // namespace hdlp
