# Copyright 2026 The thunder-tok Authors.
#
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
"""Korean-aware unigram tokenizer and byte-level BPE baseline."""

from ._core import (
    ConfigError,
    Model,
    ModelFormatError,
    ThunderError,
    Utf8Error,
    __version__,
    classify_shape,
    count_words,
    fertility,
    overlap,
    pretokenize,
    train,
    train_bpe,
)

__all__ = [
    "ConfigError",
    "Model",
    "ModelFormatError",
    "ThunderError",
    "Utf8Error",
    "classify_shape",
    "count_words",
    "fertility",
    "overlap",
    "pretokenize",
    "train",
    "train_bpe",
]
