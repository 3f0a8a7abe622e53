import json

from hamgen.families import MoleculeSpec


def h2_spec(values, qubits=2, name="h2_test"):
    return MoleculeSpec(
        name=name,
        molecule="h2",
        basis="sto-3g",
        qubits=qubits,
        axes=("r",),
        grids=(tuple(float(v) for v in values),),
    )


def write_spec(path, body: dict) -> str:
    path.write_text(json.dumps(body))
    return str(path)
