// Copyright 2026 The AdaCS-Norm Authors.
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

#include "adacs/nn/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace adacs::nn {

static_assert(std::endian::native == std::endian::little,
              "checkpoint payload is written in host order");

template <typename T>
void save_checkpoint(const std::string& path, const nlohmann::json& config,
                     const ParameterStore<T>& store) {
  nlohmann::json header;
  header["version"] = kCheckpointVersion;
  header["config"] = config;
  header["parameters"] = nlohmann::json::array();
  size_t offset = 0;
  for (const auto& [name, p] : store.items()) {
    header["parameters"].push_back(
        {{"name", name}, {"shape", p.value.shape()}, {"offset", offset}});
    offset += p.value.size() * sizeof(float);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint " + path);
  out << header.dump() << '\n';
  std::vector<float> buf;
  for (const auto& [_, p] : store.items()) {
    buf.assign(p.value.values().begin(), p.value.values().end());
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(float)));
  }
  if (!out) throw std::runtime_error("failed writing checkpoint " + path);
}

nlohmann::json read_checkpoint_header(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty checkpoint " + path);
  auto header = nlohmann::json::parse(line);
  if (header.value("version", 0) != kCheckpointVersion) {
    throw std::runtime_error("unsupported checkpoint version in " + path);
  }
  return header;
}

template <typename T>
void load_checkpoint_parameters(const std::string& path, ParameterStore<T>& store) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path);
  std::string line;
  std::getline(in, line);
  auto header = nlohmann::json::parse(line);
  const auto& manifest = header.at("parameters");
  if (manifest.size() != store.items().size()) {
    throw std::runtime_error("checkpoint has " + std::to_string(manifest.size()) +
                             " parameters, model expects " +
                             std::to_string(store.items().size()));
  }
  std::vector<char> payload((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
  for (const auto& entry : manifest) {
    const auto name = entry.at("name").get<std::string>();
    auto& p = store.get(name);
    auto shape = entry.at("shape").get<std::vector<int>>();
    if (shape != p.value.shape()) {
      throw std::runtime_error("shape mismatch for parameter " + name);
    }
    size_t offset = entry.at("offset").get<size_t>();
    size_t bytes = p.value.size() * sizeof(float);
    if (offset + bytes > payload.size()) {
      throw std::runtime_error("truncated checkpoint payload at " + name);
    }
    std::vector<float> buf(p.value.size());
    std::memcpy(buf.data(), payload.data() + offset, bytes);
    for (size_t i = 0; i < buf.size(); ++i) p.value[i] = static_cast<T>(buf[i]);
  }
}

template void save_checkpoint(const std::string&, const nlohmann::json&,
                              const ParameterStore<float>&);
template void save_checkpoint(const std::string&, const nlohmann::json&,
                              const ParameterStore<double>&);
template void load_checkpoint_parameters(const std::string&, ParameterStore<float>&);
template void load_checkpoint_parameters(const std::string&, ParameterStore<double>&);

}  // namespace adacs::nn
