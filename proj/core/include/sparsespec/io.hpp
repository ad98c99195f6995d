#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sparsespec/bench.hpp"
#include "sparsespec/fourier.hpp"
#include "sparsespec/model.hpp"

namespace sparsespec {

/// Per-population-time slices of an experimental series. T values are
/// strictly increasing and every slice shares one grid shape.
struct DatasetSeries {
    struct Slice {
        double population_time = 0.0; // fs
        SampledSignal signal;
    };
    std::vector<Slice> slices;
};

/// Sample CSV, header exactly `i1,i2,t1,t2,re,im`, floats at 17
/// significant digits so values round-trip bit-for-bit.
void write_samples_csv(std::ostream& out, const SampledSignal& signal);
void write_samples_csv(const std::filesystem::path& path, const SampledSignal& signal);

/// Throws DataError with a row-numbered message on a malformed header,
/// non-numeric fields, or duplicate (i1,i2) rows. Grid shape is the index
/// envelope; spacings are inferred from the first off-origin index per axis.
SampledSignal read_samples_csv(std::istream& in);
SampledSignal read_samples_csv(const std::filesystem::path& path);

/// Component CSV, header `omega1,omega2,beta1,beta2,amp_re,amp_im`.
void write_components_csv(std::ostream& out, const ComponentSet& components);
void write_components_csv(const std::filesystem::path& path, const ComponentSet& components);
ComponentSet read_components_csv(std::istream& in);
ComponentSet read_components_csv(const std::filesystem::path& path);

/// Spectrum CSV, header `omega1,omega2,re,im`, row-major over axis1 then axis2.
void write_spectrum_csv(std::ostream& out, const SpectrumGrid& spectrum);
void write_spectrum_csv(const std::filesystem::path& path, const SpectrumGrid& spectrum);

/// Series manifest: CSV with header `T,file`, one slice per row, file paths
/// resolved relative to the manifest. A directory is read through its
/// `manifest.csv`. Unsorted T or mismatched grid shapes are DataErrors.
DatasetSeries read_series(const std::filesystem::path& manifest_or_dir);

/// Campaign config: flat JSON object restricted to the CampaignConfig field
/// names (trials, k, grid_shape, freq_range, damp_range, fwhm_ratio,
/// dictionary_size, lambda, sampling_fractions, methods, base_seed);
/// missing fields keep their defaults, unknown keys are rejected.
CampaignConfig read_campaign_config(const std::filesystem::path& path);

/// Results CSV, header `method,fraction,trials,failures,rmse_freq,rmse_damp,seconds`.
void write_results_csv(std::ostream& out, const CampaignResult& result);
void write_results_csv(const std::filesystem::path& path, const CampaignResult& result);

} // namespace sparsespec
