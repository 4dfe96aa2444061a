// Copyright 2026 The ZSIE Authors.
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

#ifndef ZSIE_SERIALIZE_H_
#define ZSIE_SERIALIZE_H_

// JSON forms of the pipeline's data types, used by the CLI output, the
// HTTP API, and the dev-set file.

#include "json.hpp"
#include "zsie/candidates.h"
#include "zsie/inference.h"
#include "zsie/pipeline.h"
#include "zsie/text.h"

namespace zsie {

nlohmann::json SpanToJson(const Span &span);
Span SpanFromJson(const nlohmann::json &j, const std::string &path);

nlohmann::json CandidateToJson(const Candidate &candidate);
Candidate CandidateFromJson(const nlohmann::json &j, const std::string &path);

// `rank_limit` bounds the "ranked" list (0 = all types).
nlohmann::json ExtractionToJson(const Extraction &e, size_t rank_limit = 0);
Extraction ExtractionFromJson(const nlohmann::json &j,
                              const std::string &path = "extraction");

nlohmann::json SentenceToJson(const Sentence &s);

nlohmann::json AnnotationsToJson(const DocumentAnnotations &doc,
                                 size_t rank_limit = 0);

}  // namespace zsie

#endif  // ZSIE_SERIALIZE_H_
