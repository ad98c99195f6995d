#include "sparsespec/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sparsespec/errors.hpp"

namespace sparsespec {

namespace {

std::string format17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ','))
        fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& s, std::size_t row, const char* what) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || end != begin + s.size())
        throw DataError("row " + std::to_string(row) + ": non-numeric " + what + " '" + s + "'");
    return v;
}

long parse_int(const std::string& s, std::size_t row, const char* what) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const long v = std::strtol(begin, &end, 10);
    if (end == begin || end != begin + s.size())
        throw DataError("row " + std::to_string(row) + ": non-numeric " + what + " '" + s + "'");
    return v;
}

void expect_header(std::istream& in, const std::string& expected, const char* kind) {
    std::string line;
    if (!std::getline(in, line))
        throw DataError(std::string(kind) + ": empty file, expected header '" + expected + "'");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected)
        throw DataError(std::string(kind) + ": bad header '" + line + "', expected '" +
                        expected + "'");
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open '" + path.string() + "' for reading");
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot open '" + path.string() + "' for writing");
    return out;
}

} // namespace

void write_samples_csv(std::ostream& out, const SampledSignal& signal) {
    out << "i1,i2,t1,t2,re,im\n";
    for (std::size_t n = 0; n < signal.values.size(); ++n) {
        const auto& p = signal.scheme.points[n];
        out << p.i1 << ',' << p.i2 << ',' << format17(p.t1) << ',' << format17(p.t2) << ','
            << format17(signal.values[n].real()) << ',' << format17(signal.values[n].imag())
            << '\n';
    }
}

SampledSignal read_samples_csv(std::istream& in) {
    expect_header(in, "i1,i2,t1,t2,re,im", "samples");

    SampledSignal signal;
    std::map<std::pair<int, int>, std::size_t> first_row;
    std::string line;
    std::size_t row = 1;
    int max_i1 = -1, max_i2 = -1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 6)
            throw DataError("row " + std::to_string(row) + ": expected 6 fields, got " +
                            std::to_string(fields.size()));
        SamplingPoint p;
        p.i1 = static_cast<int>(parse_int(fields[0], row, "i1"));
        p.i2 = static_cast<int>(parse_int(fields[1], row, "i2"));
        p.t1 = parse_double(fields[2], row, "t1");
        p.t2 = parse_double(fields[3], row, "t2");
        if (p.i1 < 0 || p.i2 < 0)
            throw DataError("row " + std::to_string(row) + ": negative grid index");
        const auto [it, inserted] = first_row.insert({{p.i1, p.i2}, row});
        if (!inserted)
            throw DataError("duplicate sampling point (" + std::to_string(p.i1) + "," +
                            std::to_string(p.i2) + ") at rows " + std::to_string(it->second) +
                            " and " + std::to_string(row));
        signal.scheme.points.push_back(p);
        signal.values.emplace_back(parse_double(fields[4], row, "re"),
                                   parse_double(fields[5], row, "im"));
        max_i1 = std::max(max_i1, p.i1);
        max_i2 = std::max(max_i2, p.i2);
    }
    if (signal.values.empty())
        throw DataError("samples: no data rows");

    signal.scheme.n1 = max_i1 + 1;
    signal.scheme.n2 = max_i2 + 1;
    signal.scheme.dt1 = 1.0;
    signal.scheme.dt2 = 1.0;
    for (const auto& p : signal.scheme.points) {
        if (p.i1 > 0) {
            signal.scheme.dt1 = p.t1 / p.i1;
            break;
        }
    }
    for (const auto& p : signal.scheme.points) {
        if (p.i2 > 0) {
            signal.scheme.dt2 = p.t2 / p.i2;
            break;
        }
    }
    return signal;
}

void write_components_csv(std::ostream& out, const ComponentSet& components) {
    out << "omega1,omega2,beta1,beta2,amp_re,amp_im\n";
    for (const auto& c : components.components)
        out << format17(c.omega1) << ',' << format17(c.omega2) << ',' << format17(c.beta1)
            << ',' << format17(c.beta2) << ',' << format17(c.amplitude.real()) << ','
            << format17(c.amplitude.imag()) << '\n';
}

ComponentSet read_components_csv(std::istream& in) {
    expect_header(in, "omega1,omega2,beta1,beta2,amp_re,amp_im", "components");
    ComponentSet set;
    std::string line;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 6)
            throw DataError("row " + std::to_string(row) + ": expected 6 fields, got " +
                            std::to_string(fields.size()));
        Component c;
        c.omega1 = parse_double(fields[0], row, "omega1");
        c.omega2 = parse_double(fields[1], row, "omega2");
        c.beta1 = parse_double(fields[2], row, "beta1");
        c.beta2 = parse_double(fields[3], row, "beta2");
        if (c.beta1 < 0.0 || c.beta2 < 0.0)
            throw DataError("row " + std::to_string(row) + ": negative damping");
        c.amplitude = Complex{parse_double(fields[4], row, "amp_re"),
                              parse_double(fields[5], row, "amp_im")};
        set.components.push_back(c);
    }
    return set;
}

void write_spectrum_csv(std::ostream& out, const SpectrumGrid& spectrum) {
    out << "omega1,omega2,re,im\n";
    for (std::size_t a1 = 0; a1 < spectrum.omega1_axis.size(); ++a1)
        for (std::size_t a2 = 0; a2 < spectrum.omega2_axis.size(); ++a2) {
            const auto& v = spectrum.at(a1, a2);
            out << format17(spectrum.omega1_axis[a1]) << ','
                << format17(spectrum.omega2_axis[a2]) << ',' << format17(v.real()) << ','
                << format17(v.imag()) << '\n';
        }
}

DatasetSeries read_series(const std::filesystem::path& manifest_or_dir) {
    std::filesystem::path manifest = manifest_or_dir;
    if (std::filesystem::is_directory(manifest))
        manifest /= "manifest.csv";
    auto in = open_input(manifest);
    expect_header(in, "T,file", "series manifest");

    DatasetSeries series;
    const auto base = manifest.parent_path();
    std::string line;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 2)
            throw DataError("manifest row " + std::to_string(row) + ": expected 2 fields");
        DatasetSeries::Slice slice;
        slice.population_time = parse_double(fields[0], row, "T");
        std::filesystem::path file = fields[1];
        if (file.is_relative()) file = base / file;
        slice.signal = read_samples_csv(file);
        if (!series.slices.empty()) {
            if (slice.population_time <= series.slices.back().population_time)
                throw DataError("manifest row " + std::to_string(row) +
                                ": population times must be strictly increasing");
            const auto& first = series.slices.front().signal.scheme;
            if (slice.signal.scheme.n1 != first.n1 || slice.signal.scheme.n2 != first.n2)
                throw DataError("manifest row " + std::to_string(row) +
                                ": slice grid shape differs from the first slice");
        }
        series.slices.push_back(std::move(slice));
    }
    if (series.slices.empty())
        throw DataError("series manifest has no slices");
    return series;
}

CampaignConfig read_campaign_config(const std::filesystem::path& path) {
    auto in = open_input(path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("config '" + path.string() + "': " + e.what());
    }
    if (!j.is_object())
        throw DataError("config must be a flat JSON object");

    static const std::vector<std::string> known{
        "trials",          "k",        "grid_shape",         "freq_range",
        "damp_range",      "fwhm_ratio", "dictionary_size",  "lambda",
        "sampling_fractions", "methods", "base_seed"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw DataError("config: unknown field '" + key + "'");
    }

    CampaignConfig config;
    try {
        if (j.contains("trials")) config.trials = j["trials"].get<int>();
        if (j.contains("k")) config.k = j["k"].get<int>();
        if (j.contains("grid_shape")) {
            const auto v = j["grid_shape"].get<std::vector<int>>();
            if (v.size() != 2) throw DataError("config: grid_shape must have 2 entries");
            config.grid_shape = {v[0], v[1]};
        }
        if (j.contains("freq_range")) {
            const auto v = j["freq_range"].get<std::vector<double>>();
            if (v.size() != 2) throw DataError("config: freq_range must have 2 entries");
            config.freq_range = {v[0], v[1]};
        }
        if (j.contains("damp_range")) {
            const auto v = j["damp_range"].get<std::vector<double>>();
            if (v.size() != 2) throw DataError("config: damp_range must have 2 entries");
            config.damp_range = {v[0], v[1]};
        }
        if (j.contains("fwhm_ratio")) config.fwhm_ratio = j["fwhm_ratio"].get<double>();
        if (j.contains("dictionary_size")) {
            const auto v = j["dictionary_size"].get<std::vector<int>>();
            if (v.size() != 2) throw DataError("config: dictionary_size must have 2 entries");
            config.dictionary_size = {v[0], v[1]};
        }
        if (j.contains("lambda")) config.lambda = j["lambda"].get<double>();
        if (j.contains("sampling_fractions"))
            config.sampling_fractions = j["sampling_fractions"].get<std::vector<double>>();
        if (j.contains("methods")) {
            config.methods.clear();
            for (const auto& name : j["methods"].get<std::vector<std::string>>())
                config.methods.push_back(method_from_name(name));
        }
        if (j.contains("base_seed")) config.base_seed = j["base_seed"].get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError("config '" + path.string() + "': " + e.what());
    }
    return config;
}

void write_results_csv(std::ostream& out, const CampaignResult& result) {
    out << "method,fraction,trials,failures,rmse_freq,rmse_damp,seconds\n";
    for (const auto& cell : result.cells)
        out << method_name(cell.method) << ',' << format17(cell.fraction) << ',' << cell.trials
            << ',' << cell.failures << ',' << format17(cell.rmse_freq) << ','
            << format17(cell.rmse_damp) << ',' << format17(cell.seconds) << '\n';
}

void write_samples_csv(const std::filesystem::path& path, const SampledSignal& signal) {
    auto out = open_output(path);
    write_samples_csv(out, signal);
}

SampledSignal read_samples_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_samples_csv(in);
}

void write_components_csv(const std::filesystem::path& path, const ComponentSet& components) {
    auto out = open_output(path);
    write_components_csv(out, components);
}

ComponentSet read_components_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_components_csv(in);
}

void write_spectrum_csv(const std::filesystem::path& path, const SpectrumGrid& spectrum) {
    auto out = open_output(path);
    write_spectrum_csv(out, spectrum);
}

void write_results_csv(const std::filesystem::path& path, const CampaignResult& result) {
    auto out = open_output(path);
    write_results_csv(out, result);
}

} // namespace sparsespec
