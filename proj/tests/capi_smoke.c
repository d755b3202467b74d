/* Copyright 2026 The QAFD Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* Compiles as plain C and drives one diffusion through the shared
 * library, proving the header is C-clean and the ABI usable without C++. */

#include <qafd.h>

#include <stdio.h>
#include <string.h>

int main(void) {
  const char* labels[3] = {"a", "b", "c"};
  const double embeddings[6] = {0.5, 0.5, 0.5, 0.5, 0.5, 0.5};
  const uint32_t eu[2] = {0, 1};
  const uint32_t ev[2] = {1, 2};

  qafd_graph* graph = NULL;
  if (qafd_graph_create(labels, embeddings, 3, 2, eu, ev, NULL, 2, &graph) !=
      QAFD_OK) {
    fprintf(stderr, "graph_create: %s\n", qafd_last_error());
    return 1;
  }
  if (qafd_graph_node_count(graph) != 3) return 1;

  qafd_weight_params wp;
  qafd_weight_params_init(&wp);

  qafd_diffusion_params dp;
  qafd_diffusion_params_init(&dp);
  const double sinks[3] = {1.0, 1.0, 1.0};
  const double sources[3] = {2.0, 0.0, 0.0};
  dp.sink_mode = QAFD_SINK_EXPLICIT;
  dp.explicit_sinks = sinks;
  dp.source_mode = QAFD_SOURCE_EXPLICIT;
  dp.explicit_sources = sources;
  dp.epsilon = 1e-9;
  dp.selection = QAFD_SELECT_FIFO;

  const double query[2] = {0.5, 0.5};
  qafd_result* result = NULL;
  if (qafd_diffuse(graph, &wp, query, NULL, 0, &dp, &result) != QAFD_OK) {
    fprintf(stderr, "diffuse: %s\n", qafd_last_error());
    qafd_graph_free(graph);
    return 1;
  }
  int ok = qafd_result_converged(result) &&
           qafd_result_support_count(result) == 1 &&
           qafd_result_x(result)[0] > 0.0;
  if (!ok) fprintf(stderr, "unexpected diffusion outcome\n");

  /* Error path: a self-loop must fail with the right code. */
  {
    const uint32_t su[1] = {0};
    qafd_graph* bad = NULL;
    qafd_status status =
        qafd_graph_create(labels, embeddings, 3, 2, su, su, NULL, 1, &bad);
    if (status != QAFD_ERROR_SELF_LOOP) ok = 0;
    if (strcmp(qafd_status_name(status), "self_loop") != 0) ok = 0;
  }

  qafd_result_free(result);
  qafd_graph_free(graph);
  printf("capi smoke: %s (version %s)\n", ok ? "ok" : "FAILED",
         qafd_version());
  return ok ? 0 : 1;
}
