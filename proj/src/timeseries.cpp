#include "mgs/timeseries.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mgs/error.hpp"

namespace mgs {

std::string_view unit_name(Unit u) {
    switch (u) {
    case Unit::kilowatt: return "kW";
    case Unit::watt_per_m2: return "W/m2";
    case Unit::celsius: return "degC";
    case Unit::meter_per_second: return "m/s";
    case Unit::gco2_per_kwh: return "gCO2/kWh";
    }
    return "?";
}

void TimeSeries::check() const {
    if (step <= 0)
        throw Error("time series step must be > 0");
    if (values.empty())
        throw Error("time series must contain at least one value");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]))
            throw Error("non-finite value at index " + std::to_string(i));
        // Temperatures go below zero; every other unit here is a magnitude.
        if (values[i] < 0.0 && unit != Unit::celsius)
            throw Error("negative value at index " + std::to_string(i) + " (unit " +
                        std::string(unit_name(unit)) + " must be >= 0)");
    }
}

void WeatherFrame::check() const {
    poa_irradiance.check();
    ambient_temp.check();
    wind_speed_ref.check();
    if (ref_height_m <= 0.0)
        throw Error("weather reference height must be > 0");
    const bool same_grid =
        poa_irradiance.start == ambient_temp.start && ambient_temp.start == wind_speed_ref.start &&
        poa_irradiance.step == ambient_temp.step && ambient_temp.step == wind_speed_ref.step &&
        poa_irradiance.size() == ambient_temp.size() && ambient_temp.size() == wind_speed_ref.size();
    if (!same_grid)
        throw Error("weather series must share start, step and length");
}

// --- timestamp handling -----------------------------------------------------

std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& year, int& month, int& day) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365u * yoe + yoe / 4u - yoe / 100u);
    const unsigned mp = (5u * doy + 2u) / 153u;
    day = static_cast<int>(doy - (153u * mp + 2u) / 5u + 1u);
    month = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    year = static_cast<int>(y + (month <= 2));
}

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

int parse_digits(std::string_view s) {
    int v = 0;
    for (char c : s)
        v = v * 10 + (c - '0');
    return v;
}

int days_in_month(int year, int month) {
    static const int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2) {
        const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
        return leap ? 29 : 28;
    }
    return lengths[month - 1];
}

} // namespace

std::int64_t parse_iso8601(std::string_view text) {
    const auto fail = [&] {
        throw Error("invalid ISO-8601 timestamp '" + std::string(text) +
                    "' (expected YYYY-MM-DDTHH:MM:SS with Z or +HH:MM offset)");
    };
    if (text.size() < 20)
        fail();
    if (text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' || text[16] != ':')
        fail();
    const std::string_view ys = text.substr(0, 4), mos = text.substr(5, 2), ds = text.substr(8, 2),
                           hs = text.substr(11, 2), mis = text.substr(14, 2), ss = text.substr(17, 2);
    if (!all_digits(ys) || !all_digits(mos) || !all_digits(ds) || !all_digits(hs) ||
        !all_digits(mis) || !all_digits(ss))
        fail();
    const int year = parse_digits(ys), month = parse_digits(mos), day = parse_digits(ds);
    const int hour = parse_digits(hs), minute = parse_digits(mis), second = parse_digits(ss);
    if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month) || hour > 23 ||
        minute > 59 || second > 59)
        fail();

    std::int64_t offset = 0;
    const std::string_view rest = text.substr(19);
    if (rest == "Z") {
        // UTC
    } else if (rest.size() == 6 && (rest[0] == '+' || rest[0] == '-') && rest[3] == ':' &&
               all_digits(rest.substr(1, 2)) && all_digits(rest.substr(4, 2))) {
        const int oh = parse_digits(rest.substr(1, 2)), om = parse_digits(rest.substr(4, 2));
        if (oh > 23 || om > 59)
            fail();
        offset = static_cast<std::int64_t>(oh) * 3600 + om * 60;
        if (rest[0] == '-')
            offset = -offset;
    } else {
        fail();
    }
    const std::int64_t local =
        days_from_civil(year, month, day) * 86400 + hour * 3600 + minute * 60 + second;
    return local - offset;
}

std::string format_iso8601_utc(std::int64_t t) {
    std::int64_t days = t / 86400;
    std::int64_t rem = t % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    int year, month, day;
    civil_from_days(days, year, month, day);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", year, month, day,
                  static_cast<int>(rem / 3600), static_cast<int>(rem / 60 % 60),
                  static_cast<int>(rem % 60));
    return buf;
}

// --- CSV ingestion ----------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    for (;;) {
        const std::size_t comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            out.push_back(trim(line.substr(pos)));
            return out;
        }
        out.push_back(trim(line.substr(pos, comma - pos)));
        pos = comma + 1;
    }
}

double parse_value(std::string_view cell, std::size_t row, const std::string& column) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size())
        throw Error("non-parsable value '" + std::string(cell) + "' at row " + std::to_string(row) +
                    " column '" + column + "'");
    if (!std::isfinite(v))
        throw Error("non-finite value at row " + std::to_string(row) + " column '" + column + "'");
    return v;
}

} // namespace

std::map<std::string, TimeSeries>
load_csv(const std::filesystem::path& path, const std::map<std::string, Unit>& column_spec) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open trace file: " + path.string());
    if (column_spec.empty())
        throw Error("no columns requested from " + path.string());

    std::string line;
    bool have_header = false;
    std::vector<std::string> header;
    // requested column name -> field index
    std::map<std::string, std::size_t> field_of;
    std::size_t timestamp_field = 0;

    std::vector<std::int64_t> stamps;
    std::map<std::string, std::vector<double>> data;
    std::size_t row = 0; // 1-based data row counter
    std::int64_t step = 0;

    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        const std::string_view stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#')
            continue;
        const auto fields = split_fields(line);
        if (!have_header) {
            for (const auto f : fields)
                header.emplace_back(f);
            const auto ts_it = std::find(header.begin(), header.end(), "timestamp");
            if (ts_it == header.end())
                throw Error("header of " + path.string() + " has no 'timestamp' column");
            timestamp_field = static_cast<std::size_t>(ts_it - header.begin());
            for (const auto& [name, unit] : column_spec) {
                (void)unit;
                const auto it = std::find(header.begin(), header.end(), name);
                if (it == header.end())
                    throw Error("column '" + name + "' not found in " + path.string());
                field_of[name] = static_cast<std::size_t>(it - header.begin());
                data[name] = {};
            }
            have_header = true;
            continue;
        }

        ++row;
        if (fields.size() != header.size())
            throw Error("row " + std::to_string(row) + " of " + path.string() + " has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(header.size()));
        std::int64_t t = 0;
        try {
            t = parse_iso8601(fields[timestamp_field]);
        } catch (const Error& e) {
            throw Error(std::string(e.what()) + " at row " + std::to_string(row) + " of " +
                        path.string());
        }
        if (!stamps.empty()) {
            const std::int64_t delta = t - stamps.back();
            if (delta <= 0)
                throw Error("timestamps must be strictly increasing at row " + std::to_string(row) +
                            " of " + path.string());
            if (stamps.size() == 1) {
                step = delta;
            } else if (delta != step) {
                throw Error("non-uniform spacing at row " + std::to_string(row) + " of " +
                            path.string());
            }
        }
        stamps.push_back(t);
        for (const auto& [name, field] : field_of) {
            const double v = parse_value(fields[field], row, name);
            const Unit unit = column_spec.at(name);
            if (v < 0.0 && unit != Unit::celsius)
                throw Error("negative value at row " + std::to_string(row) + " column '" + name +
                            "' (unit " + std::string(unit_name(unit)) + " must be >= 0)");
            data[name].push_back(v);
        }
    }

    if (row == 0)
        throw Error("empty file: no data rows in " + path.string());
    if (row == 1)
        throw Error("cannot infer step from a single data row in " + path.string());

    std::map<std::string, TimeSeries> out;
    for (const auto& [name, unit] : column_spec) {
        TimeSeries ts;
        ts.start = stamps.front();
        ts.step = step;
        ts.values = std::move(data[name]);
        ts.unit = unit;
        ts.check();
        out.emplace(name, std::move(ts));
    }
    return out;
}

void write_csv(const std::filesystem::path& path,
               std::span<const std::pair<std::string, const TimeSeries*>> columns) {
    if (columns.empty())
        throw Error("write_csv: no columns");
    const TimeSeries& first = *columns.front().second;
    for (const auto& [name, ts] : columns) {
        ts->check();
        if (ts->start != first.start || ts->step != first.step || ts->size() != first.size())
            throw Error("write_csv: column '" + name + "' is not on the shared grid");
    }
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open output file: " + path.string());
    out << "timestamp";
    for (const auto& [name, ts] : columns) {
        (void)ts;
        out << ',' << name;
    }
    out << '\n';
    char buf[64];
    for (std::size_t i = 0; i < first.size(); ++i) {
        out << format_iso8601_utc(first.start + first.step * static_cast<std::int64_t>(i));
        for (const auto& [name, ts] : columns) {
            (void)name;
            const auto res = std::to_chars(buf, buf + sizeof(buf), ts->values[i]);
            out << ',' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
        }
        out << '\n';
    }
    if (!out)
        throw Error("failed writing " + path.string());
}

// --- resampling and alignment -----------------------------------------------

TimeSeries resample(const TimeSeries& ts, std::int64_t new_step, Resample method) {
    ts.check();
    if (new_step <= 0)
        throw Error("resample: new step must be > 0");
    if (new_step == ts.step)
        return ts;

    TimeSeries out;
    out.start = ts.start;
    out.step = new_step;
    out.unit = ts.unit;

    if (method == Resample::mean_downsample) {
        if (new_step % ts.step != 0)
            throw Error("resample: new step " + std::to_string(new_step) +
                        " s is not an integer multiple of series step " + std::to_string(ts.step) +
                        " s");
        const std::size_t k = static_cast<std::size_t>(new_step / ts.step);
        if (ts.size() % k != 0)
            throw Error("resample: series length " + std::to_string(ts.size()) +
                        " is not divisible by ratio " + std::to_string(k));
        out.values.reserve(ts.size() / k);
        for (std::size_t i = 0; i < ts.size(); i += k) {
            // A constant bucket averages to its value exactly; short-circuit so
            // the hold/mean round trip is bit-exact.
            bool constant = true;
            for (std::size_t j = 1; j < k && constant; ++j)
                constant = ts.values[i + j] == ts.values[i];
            if (constant) {
                out.values.push_back(ts.values[i]);
            } else {
                double sum = 0.0;
                for (std::size_t j = 0; j < k; ++j)
                    sum += ts.values[i + j];
                out.values.push_back(sum / static_cast<double>(k));
            }
        }
    } else {
        if (ts.step % new_step != 0)
            throw Error("resample: series step " + std::to_string(ts.step) +
                        " s is not an integer multiple of new step " + std::to_string(new_step) +
                        " s");
        const std::size_t k = static_cast<std::size_t>(ts.step / new_step);
        out.values.reserve(ts.size() * k);
        for (const double v : ts.values)
            out.values.insert(out.values.end(), k, v);
    }
    return out;
}

TimeSeries clip_to_window(const TimeSeries& ts, Window window, std::int64_t target_step) {
    ts.check();
    if (target_step <= 0)
        throw Error("align: target step must be > 0");
    if (window.end <= window.start)
        throw Error("align: window end must be after window start");
    if ((window.end - window.start) % target_step != 0)
        throw Error("align: window duration " + std::to_string(window.end - window.start) +
                    " s is not a multiple of the target step " + std::to_string(target_step) + " s");
    if (ts.start > window.start)
        throw Error("insufficient coverage: series starts " + std::to_string(ts.start - window.start) +
                    " s after the window start");
    if (ts.end() < window.end)
        throw Error("insufficient coverage: series ends " + std::to_string(window.end - ts.end()) +
                    " s before the window end");

    TimeSeries work = ts;
    if (ts.step > target_step) {
        // Upsample first so the window can cut inside a coarse sample.
        work = resample(work, target_step, Resample::hold_upsample);
    }
    if ((window.start - work.start) % work.step != 0)
        throw Error("align: window start is not on the series grid (offset " +
                    std::to_string((window.start - work.start) % work.step) + " s)");
    const std::size_t i0 = static_cast<std::size_t>((window.start - work.start) / work.step);
    const std::size_t count = static_cast<std::size_t>((window.end - window.start) / work.step);
    TimeSeries sliced;
    sliced.start = window.start;
    sliced.step = work.step;
    sliced.unit = work.unit;
    sliced.values.assign(work.values.begin() + static_cast<std::ptrdiff_t>(i0),
                         work.values.begin() + static_cast<std::ptrdiff_t>(i0 + count));
    if (sliced.step < target_step)
        return resample(sliced, target_step, Resample::mean_downsample);
    return sliced;
}

std::vector<TimeSeries>
align(std::span<const TimeSeries> series_set, Window window, std::int64_t target_step) {
    std::vector<TimeSeries> out;
    out.reserve(series_set.size());
    for (std::size_t i = 0; i < series_set.size(); ++i) {
        try {
            out.push_back(clip_to_window(series_set[i], window, target_step));
        } catch (const Error& e) {
            throw Error("series " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return out;
}

} // namespace mgs
