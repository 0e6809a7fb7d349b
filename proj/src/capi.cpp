// Copyright (c) 2026 The latspec authors
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

#include "latspec.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "latspec/errors.hpp"
#include "latspec/experiment.hpp"

struct latspec_experiment {
  latspec::Experiment impl;
};

namespace {

thread_local std::string g_last_error;

latspec_status status_of(latspec::errc code) {
  switch (code) {
    case latspec::errc::ok: return LATSPEC_OK;
    case latspec::errc::invalid_argument: return LATSPEC_ERR_INVALID_ARGUMENT;
    case latspec::errc::resolution: return LATSPEC_ERR_RESOLUTION;
    case latspec::errc::budget: return LATSPEC_ERR_BUDGET;
    case latspec::errc::convergence: return LATSPEC_ERR_CONVERGENCE;
    case latspec::errc::domain: return LATSPEC_ERR_DOMAIN;
    case latspec::errc::io: return LATSPEC_ERR_IO;
  }
  return LATSPEC_ERR_INTERNAL;
}

template <typename Fn>
latspec_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return LATSPEC_OK;
  } catch (const latspec::error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LATSPEC_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown internal failure";
    return LATSPEC_ERR_INTERNAL;
  }
}

latspec_status fail_arg(const char* msg) {
  g_last_error = msg;
  return LATSPEC_ERR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

latspec_status latspec_experiment_create(const char* config_json,
                                         latspec_experiment** out_handle) {
  if (out_handle == nullptr) return fail_arg("out_handle must not be NULL");
  *out_handle = nullptr;
  if (config_json == nullptr) return fail_arg("config_json must not be NULL");
  return guarded([&] {
    latspec::json cfg;
    try {
      cfg = latspec::json::parse(config_json);
    } catch (const std::exception& e) {
      throw latspec::error(latspec::errc::invalid_argument,
                           std::string("config: not valid JSON: ") + e.what());
    }
    *out_handle = new latspec_experiment{latspec::Experiment(std::move(cfg))};
  });
}

latspec_status latspec_experiment_run(latspec_experiment* handle) {
  if (handle == nullptr) return fail_arg("handle must not be NULL");
  return guarded([&] { handle->impl.run(); });
}

latspec_status latspec_experiment_summary_json(const latspec_experiment* handle,
                                               char** out_json) {
  if (out_json == nullptr) return fail_arg("out_json must not be NULL");
  *out_json = nullptr;
  if (handle == nullptr) return fail_arg("handle must not be NULL");
  return guarded([&] { *out_json = dup_string(handle->impl.summary().dump()); });
}

latspec_status latspec_experiment_write_artifacts(const latspec_experiment* handle,
                                                  const char* dir) {
  if (handle == nullptr) return fail_arg("handle must not be NULL");
  if (dir == nullptr) return fail_arg("dir must not be NULL");
  return guarded([&] { handle->impl.write_artifacts(dir); });
}

latspec_status latspec_experiment_check(const latspec_experiment* handle,
                                        const char* claim, int* out_pass,
                                        char** out_detail) {
  if (out_pass == nullptr) return fail_arg("out_pass must not be NULL");
  *out_pass = 0;
  if (out_detail != nullptr) *out_detail = nullptr;
  if (handle == nullptr) return fail_arg("handle must not be NULL");
  if (claim == nullptr) return fail_arg("claim must not be NULL");
  return guarded([&] {
    std::string detail;
    const bool ok = handle->impl.check(claim, out_detail ? &detail : nullptr);
    *out_pass = ok ? 1 : 0;
    if (out_detail != nullptr) *out_detail = dup_string(detail);
  });
}

latspec_status latspec_experiment_claims_json(const latspec_experiment* handle,
                                              char** out_json) {
  if (out_json == nullptr) return fail_arg("out_json must not be NULL");
  *out_json = nullptr;
  if (handle == nullptr) return fail_arg("handle must not be NULL");
  return guarded([&] {
    latspec::json arr = latspec::json::array();
    for (const std::string& c : handle->impl.claims()) arr.push_back(c);
    *out_json = dup_string(arr.dump());
  });
}

void latspec_experiment_destroy(latspec_experiment* handle) { delete handle; }

latspec_status latspec_catalog_json(char** out_json) {
  if (out_json == nullptr) return fail_arg("out_json must not be NULL");
  *out_json = nullptr;
  return guarded([&] { *out_json = dup_string(latspec::experiment_catalog().dump()); });
}

const char* latspec_last_error(void) { return g_last_error.c_str(); }

void latspec_string_free(char* s) { delete[] s; }

const char* latspec_version(void) { return "0.1.0"; }

}  // extern "C"
