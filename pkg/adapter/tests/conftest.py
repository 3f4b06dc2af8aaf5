import json

import numpy as np
import pytest
from PIL import Image


def write_frame(path, value):
    arr = np.full((8, 8, 3), int(value * 255), dtype=np.uint8)
    Image.fromarray(arr, mode="RGB").save(path)


@pytest.fixture()
def ten_frame_batch(tmp_path):
    """Batch file + frames, the protocol-conformance fixture size."""
    items = []
    for i in range(10):
        path = tmp_path / f"frame{i}.png"
        write_frame(path, i / 10)
        items.append({"frame_id": f"frame{i}", "path": str(path)})
    batch_file = tmp_path / "batch.jsonl"
    batch_file.write_text("".join(json.dumps(it) + "\n" for it in items))
    return batch_file, items
