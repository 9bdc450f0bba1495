// Copyright 2026 The qhybrid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <gtest/gtest.h>

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "qhybrid/data.hpp"
#include "qhybrid/error.hpp"

namespace {

using namespace qhybrid;
namespace fs = std::filesystem;

class DataTest : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("qhybrid_data_" + std::string(::testing::UnitTest::GetInstance()
                                                  ->current_test_info()
                                                  ->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    static void write_bytes(const fs::path &p, const std::vector<unsigned char> &b) {
        std::ofstream out(p, std::ios::binary);
        out.write(reinterpret_cast<const char *>(b.data()),
                  static_cast<std::streamsize>(b.size()));
    }

    static std::vector<unsigned char> be32(std::uint32_t v) {
        return {static_cast<unsigned char>(v >> 24), static_cast<unsigned char>(v >> 16),
                static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
    }

    // Two 2x3 images with known bytes and labels {7, 2}.
    void write_fixture(const fs::path &img, const fs::path &lbl) {
        std::vector<unsigned char> i;
        for (auto v : {be32(data::kImagesMagic), be32(2), be32(2), be32(3)}) {
            i.insert(i.end(), v.begin(), v.end());
        }
        for (unsigned char b : {0, 51, 102, 153, 204, 255, 255, 0, 1, 2, 3, 128}) {
            i.push_back(b);
        }
        write_bytes(img, i);
        std::vector<unsigned char> l;
        for (auto v : {be32(data::kLabelsMagic), be32(2)}) {
            l.insert(l.end(), v.begin(), v.end());
        }
        l.push_back(7);
        l.push_back(2);
        write_bytes(lbl, l);
    }

    fs::path dir_;
};

TEST_F(DataTest, ParsesHandBuiltFixture) {
    write_fixture(dir_ / "i", dir_ / "l");
    const auto raw = data::load_idx(dir_ / "i", dir_ / "l");
    ASSERT_EQ(raw.size(), 2u);
    EXPECT_EQ(raw.rows, 2u);
    EXPECT_EQ(raw.cols, 3u);
    EXPECT_EQ(raw.labels, (std::vector<int>{7, 2}));
    EXPECT_DOUBLE_EQ(raw.images[0][1], 51.0 / 255.0);
    EXPECT_DOUBLE_EQ(raw.images[0][5], 1.0);
    EXPECT_DOUBLE_EQ(raw.images[1][5], 128.0 / 255.0);
}

TEST_F(DataTest, ReadsGzipTransparently) {
    write_fixture(dir_ / "i", dir_ / "l");
    for (const char *name : {"i", "l"}) {
        std::ifstream in(dir_ / name, std::ios::binary);
        const std::string bytes((std::istreambuf_iterator<char>(in)), {});
        gzFile gz = gzopen((dir_ / (std::string(name) + ".gz")).c_str(), "wb");
        gzwrite(gz, bytes.data(), static_cast<unsigned>(bytes.size()));
        gzclose(gz);
    }
    const auto plain = data::load_idx(dir_ / "i", dir_ / "l");
    const auto packed = data::load_idx(dir_ / "i.gz", dir_ / "l.gz");
    EXPECT_EQ(plain.images, packed.images);
    EXPECT_EQ(plain.labels, packed.labels);
}

TEST_F(DataTest, WriteThenReadRoundTrips) {
    write_fixture(dir_ / "i", dir_ / "l");
    const auto raw = data::load_idx(dir_ / "i", dir_ / "l");
    data::write_idx(raw, dir_ / "i2", dir_ / "l2");
    const auto again = data::load_idx(dir_ / "i2", dir_ / "l2");
    EXPECT_EQ(again.images, raw.images);
    EXPECT_EQ(again.labels, raw.labels);
    EXPECT_EQ(again.rows, raw.rows);
}

TEST_F(DataTest, TruncatedFileFailsClosed) {
    write_fixture(dir_ / "i", dir_ / "l");
    fs::resize_file(dir_ / "i", fs::file_size(dir_ / "i") - 1);
    try {
        (void)data::load_idx(dir_ / "i", dir_ / "l");
        FAIL() << "expected FormatError";
    } catch (const FormatError &e) {
        EXPECT_NE(std::string(e.what()).find("offset"), std::string::npos) << e.what();
    }
    fs::resize_file(dir_ / "i", 6);
    EXPECT_THROW(data::load_idx(dir_ / "i", dir_ / "l"), FormatError);
}

TEST_F(DataTest, BadMagicRejected) {
    write_fixture(dir_ / "i", dir_ / "l");
    // Swapped files: each magic is wrong for its role.
    EXPECT_THROW(data::load_idx(dir_ / "l", dir_ / "i"), FormatError);
}

TEST_F(DataTest, CountMismatchRejected) {
    write_fixture(dir_ / "i", dir_ / "l");
    std::vector<unsigned char> l{0, 0, 8, 1, 0, 0, 0, 3, 1, 2, 3};
    write_bytes(dir_ / "l3", l);
    EXPECT_THROW(data::load_idx(dir_ / "i", dir_ / "l3"), FormatError);
}

TEST_F(DataTest, MissingFileIsAnError) {
    EXPECT_THROW(data::load_idx(dir_ / "nope", dir_ / "nope2"), Error);
    EXPECT_THROW(data::load_mnist_dir(dir_), Error);
}

data::RawDataset synthetic(std::size_t per_class, int classes) {
    data::RawDataset raw;
    raw.rows = 2;
    raw.cols = 2;
    for (int c = 0; c < classes; ++c) {
        for (std::size_t i = 0; i < per_class; ++i) {
            raw.images.push_back({c / 10.0, static_cast<double>(i) / 1000.0, 0.0, 1.0});
            raw.labels.push_back(c);
        }
    }
    return raw;
}

TEST(Split, BalancedCounts) {
    const auto raw = synthetic(60, 10);
    const auto s = data::filter_and_split(raw, data::kPaperClasses, 100, 100, 0);
    ASSERT_EQ(s.train.size(), 100u);
    ASSERT_EQ(s.test.size(), 100u);
    for (int c = 0; c < 4; ++c) {
        EXPECT_EQ(std::count(s.train.labels.begin(), s.train.labels.end(), c), 25);
        EXPECT_EQ(std::count(s.test.labels.begin(), s.test.labels.end(), c), 25);
    }
    const auto odd = data::filter_and_split(raw, data::kPaperClasses, 10, 3, 0);
    EXPECT_EQ(std::count(odd.train.labels.begin(), odd.train.labels.end(), 0), 3);
    EXPECT_EQ(std::count(odd.train.labels.begin(), odd.train.labels.end(), 1), 3);
    EXPECT_EQ(std::count(odd.train.labels.begin(), odd.train.labels.end(), 2), 2);
    EXPECT_EQ(std::count(odd.test.labels.begin(), odd.test.labels.end(), 3), 0);
}

TEST(Split, DeterministicAndDisjointAcrossSeeds) {
    const auto raw = synthetic(60, 10);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto a = data::filter_and_split(raw, data::kPaperClasses, 40, 40, seed);
        const auto b = data::filter_and_split(raw, data::kPaperClasses, 40, 40, seed);
        EXPECT_EQ(a.train.images, b.train.images);
        EXPECT_EQ(a.test.labels, b.test.labels);
        std::set<std::vector<double>> train(a.train.images.begin(), a.train.images.end());
        EXPECT_EQ(train.size(), 40u);
        for (const auto &img : a.test.images) {
            EXPECT_EQ(train.count(img), 0u);
        }
        EXPECT_NO_THROW(a.train.validate(4));
        EXPECT_NO_THROW(a.test.validate(4));
    }
    const auto s0 = data::filter_and_split(raw, data::kPaperClasses, 40, 40, 0);
    const auto s1 = data::filter_and_split(raw, data::kPaperClasses, 40, 40, 1);
    EXPECT_NE(s0.train.images, s1.train.images);
}

TEST(Split, RemapsLabelsToPositions) {
    const auto raw = synthetic(10, 10);
    const std::vector<int> classes{7, 3};
    const auto s = data::filter_and_split(raw, classes, 4, 4, 2);
    for (std::size_t i = 0; i < s.train.size(); ++i) {
        const double orig = s.train.images[i][0] * 10.0;
        EXPECT_EQ(s.train.labels[i], std::lround(orig) == 7 ? 0 : 1);
    }
}

TEST(Split, InsufficientSamples) {
    const auto raw = synthetic(10, 4);
    EXPECT_THROW(data::filter_and_split(raw, data::kPaperClasses, 40, 4, 0), DataError);
}

TEST(Dataset, ValidateCatchesBadValues) {
    data::Dataset d;
    d.rows = 1;
    d.cols = 1;
    d.images = {{0.5}};
    d.labels = {4};
    EXPECT_THROW(d.validate(4), DataError);
    d.labels = {0};
    d.images = {{1.5}};
    EXPECT_THROW(d.validate(4), DataError);
    d.images = {{1.0}};
    EXPECT_NO_THROW(d.validate(4));
}

TEST(RealData, BundledMnistLoads) {
    const auto raw = data::load_mnist_dir(QHYBRID_DATA_DIR);
    EXPECT_EQ(raw.rows, 28u);
    EXPECT_EQ(raw.cols, 28u);
    // Either the full training file or the bundled 5000-image subset.
    EXPECT_TRUE(raw.size() == 60000u || raw.size() == 5000u) << raw.size();
    for (const auto &img : raw.images) {
        ASSERT_EQ(img.size(), 784u);
        for (const double p : img) {
            ASSERT_GE(p, 0.0);
            ASSERT_LE(p, 1.0);
        }
    }
    const auto s = data::filter_and_split(raw, data::kPaperClasses, 500, 100, 0);
    EXPECT_EQ(s.train.size(), 500u);
    s.train.validate(4);
}

} // namespace
