/*
   Copyright 2026 The divop Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// Report formats and the resumable scan driver.

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "divop/invariance.hpp"

namespace divop {

namespace {

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string unit_key(std::uint32_t p, std::uint64_t k, unsigned N) {
    return std::to_string(p) + "," + std::to_string(k) + "," + std::to_string(N);
}

void write_atomically(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write checkpoint " + tmp);
        f << text;
        f.flush();
        if (!f) throw std::runtime_error("cannot write checkpoint " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

std::string csv_header() { return "p,N,k,a,b,dim,names\n"; }

std::string csv_rows(const ClassificationTable& t, bool include_empty) {
    std::ostringstream os;
    for (const auto& c : t.cells) {
        if (c.basis.empty() && !include_empty) continue;
        os << t.p << ',' << t.N << ',' << t.k << ',' << c.a << ',' << c.b << ',' << c.dimension() << ','
           << csv_quote(c.identification.joined()) << '\n';
    }
    return os.str();
}

std::string markdown(const ClassificationTable& t) {
    std::ostringstream os;
    os << "### p = " << t.p << ", N = " << t.N << ", order " << t.k;
    if (t.mode == Mode::general) os << " (all orders up to " << t.k << ")";
    os << "\n\n";
    if (t.empty()) {
        os << "no invariant operators\n";
        return os.str();
    }
    os << "| (a,b) | D(f,g) | comment |\n|---|---|---|\n";
    for (const auto& c : t.cells) {
        if (c.basis.empty()) continue;
        std::string ops;
        for (const auto& B : c.basis) ops += (ops.empty() ? "" : "; ") + render(B);
        std::string names = c.identification.joined();
        for (std::size_t at = names.find('|'); at != std::string::npos; at = names.find('|', at + 2))
            names.replace(at, 1, "\\|");
        os << "| (" << c.a << "," << c.b << ") | " << ops << " | dim " << c.dimension();
        if (!names.empty()) os << ": " << names;
        os << " |\n";
    }
    return os.str();
}

nlohmann::json to_json(const ClassificationTable& t) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : t.cells) {
        nlohmann::json cell = {{"a", c.a}, {"b", c.b}, {"dim", c.dimension()}};
        if (!c.basis.empty()) {
            nlohmann::json basis = nlohmann::json::array();
            for (const auto& B : c.basis) basis.push_back(to_json(B));
            cell["basis"] = basis;
            cell["spanning"] = c.identification.spanning;
            cell["relations"] = c.identification.relations;
            cell["complete"] = c.identification.complete;
            cell["names"] = c.identification.joined();
        }
        cells.push_back(cell);
    }
    return {{"p", t.p}, {"N", t.N}, {"k", t.k}, {"mode", to_string(t.mode)}, {"cells", cells}};
}

ClassificationTable table_from_json(const nlohmann::json& j) {
    try {
        ClassificationTable t;
        t.p = j.at("p").get<std::uint32_t>();
        t.N = j.at("N").get<unsigned>();
        t.k = j.at("k").get<std::uint64_t>();
        t.mode = mode_from_string(j.at("mode").get<std::string>());
        for (const auto& cj : j.at("cells")) {
            ClassificationCell c;
            c.a = cj.at("a").get<std::int64_t>();
            c.b = cj.at("b").get<std::int64_t>();
            if (cj.contains("basis")) {
                for (const auto& bj : cj.at("basis")) c.basis.push_back(operator_from_json(bj));
                c.identification.spanning = cj.at("spanning").get<std::vector<std::string>>();
                c.identification.relations = cj.at("relations").get<std::vector<std::string>>();
                c.identification.complete = cj.at("complete").get<bool>();
            }
            t.cells.push_back(std::move(c));
        }
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("classification JSON: ") + e.what());
    }
}

ScanStats scan(const ScanConfig& config, const std::function<void(const ClassificationTable&)>& sink) {
    for (std::uint32_t p : config.primes)
        if (!gfp::is_prime(p)) throw std::invalid_argument("scan: " + std::to_string(p) + " is not prime");
    for (unsigned N : config.heights)
        if (N == 0) throw std::invalid_argument("scan: N must be positive");

    nlohmann::json state = {{"mode", to_string(config.mode)},
                            {"completed", nlohmann::json::array()},
                            {"results", nlohmann::json::object()}};
    std::set<std::tuple<std::uint32_t, std::uint64_t, unsigned>> done;
    if (!config.checkpoint.empty() && std::filesystem::exists(config.checkpoint)) {
        std::ifstream f(config.checkpoint);
        try {
            state = nlohmann::json::parse(f);
            if (state.at("mode").get<std::string>() != to_string(config.mode))
                throw std::invalid_argument("checkpoint was written for mode " + state.at("mode").get<std::string>());
            if (!state.contains("results")) state["results"] = nlohmann::json::object();
            for (const auto& u : state.at("completed"))
                done.emplace(u.at(0).get<std::uint32_t>(), u.at(1).get<std::uint64_t>(), u.at(2).get<unsigned>());
        } catch (const nlohmann::json::exception& e) {
            throw std::invalid_argument("malformed checkpoint " + config.checkpoint + ": " + e.what());
        }
    }

    ScanStats stats;
    for (std::uint32_t p : config.primes) {
        for (std::uint64_t k = config.k_min; k <= config.k_max; ++k) {
            const std::vector<unsigned> Ns = config.heights.empty() ? minimal_to_threshold(p, k) : config.heights;
            for (unsigned N : Ns) {
                ++stats.units;
                const std::string key = unit_key(p, k, N);
                if (done.count({p, k, N}) && state["results"].contains(key)) {
                    sink(table_from_json(state["results"][key]));
                    ++stats.resumed;
                    continue;
                }
                const ClassificationTable table = classify(p, N, k, config.mode);
                ++stats.computed;
                sink(table);
                if (!config.checkpoint.empty()) {
                    state["results"][key] = to_json(table);
                    state["completed"].push_back({p, k, N});
                    done.emplace(p, k, N);
                    write_atomically(config.checkpoint, state.dump());
                }
            }
        }
    }
    return stats;
}

}  // namespace divop
