#include "gbeval/dataprep.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "gbeval/rng.hpp"

namespace gbeval {

using nlohmann::json;

std::vector<std::string> DatasetManifest::training_ids(int fold_index) const {
    std::unordered_set<std::string> val(folds.at(fold_index).validation_ids.begin(),
                                        folds.at(fold_index).validation_ids.end());
    std::vector<std::string> out;
    for (const auto& p : pairs)
        if (!val.count(p.id())) out.push_back(p.id());
    return out;
}

size_t DatasetManifest::effective_training_count(int fold_index) const {
    return training_ids(fold_index).size() * (augment_d4 ? 8 : 1);
}

std::vector<FoldSpec> build_folds(const std::vector<std::string>& pair_ids, int k,
                                  uint64_t rng_seed) {
    const size_t n = pair_ids.size();
    if (k < 2) throw ConfigError("fold count k must be at least 2");
    if (n < static_cast<size_t>(k))
        throw ConfigError("cannot build " + std::to_string(k) + " folds from " +
                          std::to_string(n) + " pairs");

    std::vector<std::string> shuffled = pair_ids;
    Rng rng(rng_seed);
    rng.shuffle(shuffled);

    // contiguous partition; the first n % k folds get one extra item
    const size_t base = n / static_cast<size_t>(k);
    const size_t extra = n % static_cast<size_t>(k);
    std::vector<FoldSpec> folds(k);
    size_t pos = 0;
    for (int f = 0; f < k; ++f) {
        const size_t sz = base + (static_cast<size_t>(f) < extra ? 1 : 0);
        folds[f].fold_index = f;
        folds[f].validation_ids.assign(shuffled.begin() + pos, shuffled.begin() + pos + sz);
        std::sort(folds[f].validation_ids.begin(), folds[f].validation_ids.end());
        pos += sz;
    }
    return folds;
}

void validate_manifest(const DatasetManifest& m) {
    if (m.k < 2) throw DataError("manifest: k must be at least 2");
    if (static_cast<int>(m.folds.size()) != m.k)
        throw DataError("manifest: fold list size does not match k");

    std::set<std::string> ids;
    for (const auto& p : m.pairs) {
        if (!ids.insert(p.id()).second)
            throw DataError("manifest: duplicate pair id " + p.id());
        if (p.quadrant && (*p.quadrant < 0 || *p.quadrant > 3))
            throw DataError("manifest: quadrant out of range for " + p.id());
    }

    size_t min_sz = m.pairs.size();
    size_t max_sz = 0;
    std::set<std::string> seen;
    for (const auto& f : m.folds) {
        min_sz = std::min(min_sz, f.validation_ids.size());
        max_sz = std::max(max_sz, f.validation_ids.size());
        for (const auto& id : f.validation_ids) {
            if (!ids.count(id))
                throw DataError("manifest: fold references unknown pair id " + id);
            if (!seen.insert(id).second)
                throw DataError("manifest: pair " + id + " appears in more than one validation set");
        }
    }
    if (seen.size() != ids.size())
        throw DataError("manifest: validation sets do not cover every pair");
    if (max_sz - min_sz > 1) throw DataError("manifest: fold sizes differ by more than 1");
}

void validate_manifest_files(const DatasetManifest& m, const std::filesystem::path& base_dir) {
    std::string missing;
    for (const auto& p : m.pairs) {
        for (const auto& rel : {p.image_path, p.annotation_path}) {
            std::filesystem::path fp(rel);
            if (fp.is_relative()) fp = base_dir / fp;
            if (!std::filesystem::exists(fp)) missing += "\n  " + fp.string();
        }
    }
    if (!missing.empty()) throw InputError("manifest references missing files:" + missing);
}

void write_manifest(const DatasetManifest& m, const std::filesystem::path& path) {
    validate_manifest(m);
    json j;
    j["version"] = m.version;
    j["rng_seed"] = m.rng_seed;
    j["k"] = m.k;
    j["augment_d4"] = m.augment_d4;
    j["pairs"] = json::array();
    for (const auto& p : m.pairs) {
        json jp{{"image", p.image_path},
                {"annotation", p.annotation_path},
                {"origin_id", p.origin_id}};
        if (p.quadrant)
            jp["quadrant"] = *p.quadrant;
        else
            jp["quadrant"] = nullptr;
        j["pairs"].push_back(jp);
    }
    j["folds"] = json::array();
    for (const auto& f : m.folds)
        j["folds"].push_back({{"fold_index", f.fold_index}, {"validation_ids", f.validation_ids}});

    std::ofstream out(path);
    if (!out) throw InputError("cannot write manifest: " + path.string());
    out << j.dump(2) << "\n";
}

DatasetManifest read_manifest(const std::filesystem::path& path, bool check_files) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open manifest: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError("manifest is not valid JSON: " + std::string(e.what()));
    }

    DatasetManifest m;
    try {
        m.version = j.at("version").get<int>();
        m.rng_seed = j.at("rng_seed").get<uint64_t>();
        m.k = j.at("k").get<int>();
        m.augment_d4 = j.value("augment_d4", true);
        for (const auto& jp : j.at("pairs")) {
            ImagePair p;
            p.image_path = jp.at("image").get<std::string>();
            p.annotation_path = jp.at("annotation").get<std::string>();
            p.origin_id = jp.at("origin_id").get<std::string>();
            if (jp.contains("quadrant") && !jp.at("quadrant").is_null())
                p.quadrant = jp.at("quadrant").get<int>();
            m.pairs.push_back(std::move(p));
        }
        for (const auto& jf : j.at("folds")) {
            FoldSpec f;
            f.fold_index = jf.at("fold_index").get<int>();
            f.validation_ids = jf.at("validation_ids").get<std::vector<std::string>>();
            m.folds.push_back(std::move(f));
        }
    } catch (const json::exception& e) {
        throw DataError("manifest schema violation: " + std::string(e.what()));
    }

    validate_manifest(m);
    if (check_files) validate_manifest_files(m, path.parent_path());
    return m;
}

}  // namespace gbeval
