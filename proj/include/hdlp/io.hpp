#pragma once

#include "hdlp/data.hpp"
#include "hdlp/favar.hpp"
#include "hdlp/local_projections.hpp"
#include "hdlp/simulation.hpp"

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace hdlp {

/// CSV with a header row; the first column holds time labels. Empty cells
/// and NA/NaN read as missing.
Dataset parse_dataset_csv(std::istream& in, const std::string& source = "<input>");
Dataset read_dataset_csv(const std::string& path);

/// Metadata CSV with columns series,tcode,speed (speed: slow, fast or none).
/// Every listed series must exist in the dataset.
void parse_metadata(std::istream& in, Dataset& data, const std::string& source = "<metadata>");
void read_metadata(const std::string& path, Dataset& data);

Dataset load_dataset(const std::string& csv_path, const std::string& metadata_path = {});

void write_dataset_csv(std::ostream& out, const Dataset& data);
/// series,tcode,speed for every column.
void write_metadata_csv(std::ostream& out, const Dataset& data);
void write_matrix_csv(std::ostream& out, const Matrix& m, const std::vector<std::string>& header);

/// Shortest round-trip decimal form; "nan", "inf" and "-inf" otherwise.
std::string format_number(double v);

/// Long format: estimator,response,horizon,state,estimate,se,lo,hi.
void write_irf_csv(std::ostream& out, const std::vector<ImpulseResponse>& irfs);
/// FAVAR rows in the same layout (state "linear"); `series` empty = all.
void write_favar_csv(std::ostream& out, const FavarResult& favar, const std::vector<std::string>& series = {});
/// h,label,estimate,se,ci_low,ci_high,q_t,lambda.
void write_horizon_csv(std::ostream& out, const ImpulseResponse& irf);
/// dgp,P,T,estimator,horizon,coverage,mean_width,replications,failures.
void write_coverage_csv(std::ostream& out, const std::vector<CoverageReport>& reports);

nlohmann::json to_json(const HorizonEstimate& est);
nlohmann::json to_json(const ImpulseResponse& irf);
nlohmann::json to_json(const CoverageReport& report);
nlohmann::json to_json(const FavarResult& favar, const std::vector<std::string>& series = {});

/// One curve with a shaded band per state, one panel per response; FAVAR
/// results are overlaid when their series matches a panel's response.
std::string irf_svg(const std::vector<ImpulseResponse>& irfs, const FavarResult* favar = nullptr,
                    const std::vector<std::string>& favar_series = {});
std::string favar_svg(const FavarResult& favar, const std::vector<std::string>& series);
/// Coverage and mean width against the horizon for every report; solid
/// lines for the first DGP, dashed for the sign-switching one.
std::string coverage_svg(const std::vector<CoverageReport>& reports, double nominal = 0.95);

/// Writes text to a file, raising IoError on failure.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace hdlp
