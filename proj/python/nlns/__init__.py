# Copyright 2026 The NLNS Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Neural large neighborhood search for constraint satisfaction problems."""

from nlns._nlns import (
    CapacityError,
    ConfigError,
    DomainError,
    Error,
    Instance,
    Model,
    ParseError,
    StructureError,
    TrainingFault,
    cost,
    destroy,
    destroy_operators,
    eval_hard,
    gen_sudoku,
    graph_instance,
    load_dataset,
    load_instance,
    loss_grad_logits,
    loss_grad_q,
    parse_sudoku,
    random_graph_instance,
    repair,
    serialize_sudoku,
    solve,
    total_loss,
    train,
    violation_scores,
)

__all__ = [
    "CapacityError",
    "ConfigError",
    "DomainError",
    "Error",
    "Instance",
    "Model",
    "ParseError",
    "StructureError",
    "TrainingFault",
    "cost",
    "destroy",
    "destroy_operators",
    "eval_hard",
    "gen_sudoku",
    "graph_instance",
    "load_dataset",
    "load_instance",
    "loss_grad_logits",
    "loss_grad_q",
    "parse_sudoku",
    "random_graph_instance",
    "repair",
    "serialize_sudoku",
    "solve",
    "total_loss",
    "train",
    "violation_scores",
]
