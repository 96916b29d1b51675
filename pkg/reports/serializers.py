# reports/serializers.py
"""
JSON documents in and out of the commands. Every scalar is a string in
the expression grammar of ``arith.parser``; floats are refused.
"""
from rest_framework import serializers

from arith.parser import parse_ratfun
from bf.morphisms import BfMorphism, LineWithSection
from core.exceptions import DivisionByZero, ExpressionSyntaxError
from geniso.chains import GenIso
from geniso.services import from_matrix, lambda_name, mu_name
from lattices.bases import DVR, FIELD
from lattices.matrices import MatK

BASES = {"dvr": DVR, "field": FIELD}


class RatFunField(serializers.CharField):
    def to_internal_value(self, data):
        if not isinstance(data, str):
            raise serializers.ValidationError(f"expected an expression string, got {type(data).__name__}")
        text = super().to_internal_value(data)
        try:
            return parse_ratfun(text)
        except ExpressionSyntaxError as exc:
            raise serializers.ValidationError(f"syntax error in {text!r}: {exc}") from exc
        except DivisionByZero as exc:
            raise serializers.ValidationError(f"division by zero in {text!r}: {exc}") from exc

    def to_representation(self, value):
        return str(value)


class MatrixField(serializers.Field):
    """A list of rows of expression strings, read into a MatK."""

    default_error_messages = {
        "not_rows": "expected a list of rows",
        "ragged": "rows have different lengths",
    }

    def to_internal_value(self, data):
        if not isinstance(data, list) or not all(isinstance(row, list) for row in data):
            self.fail("not_rows")
        if len({len(row) for row in data}) > 1:
            self.fail("ragged")
        entry = RatFunField()
        errors, rows = {}, []
        for i, row in enumerate(data):
            values = []
            for j, text in enumerate(row):
                try:
                    values.append(entry.to_internal_value(text))
                except serializers.ValidationError as exc:
                    errors[f"{i},{j}"] = exc.detail
            rows.append(values)
        if errors:
            raise serializers.ValidationError(errors)
        return MatK(rows, cols=len(data[0]) if data else 0)

    def to_representation(self, value):
        return [[str(x) for x in row] for row in value.tolist()]


class BaseField(serializers.ChoiceField):
    def __init__(self, **kwargs):
        super().__init__(choices=sorted(BASES), **kwargs)

    def to_internal_value(self, data):
        return BASES[super().to_internal_value(data)]

    def to_representation(self, value):
        return value.kind


def _check_square(matrix, n, name):
    if matrix.shape != (n, n):
        raise serializers.ValidationError({name: f"expected {n}x{n}, got {matrix.rows}x{matrix.cols}"})


# -------------------- Matrix documents --------------------

class MatrixInputSerializer(serializers.Serializer):
    """{"n": int, "entries": [[string]]}: an invertible matrix over K."""

    n = serializers.IntegerField(min_value=1)
    entries = MatrixField()

    def validate(self, attrs):
        _check_square(attrs["entries"], attrs["n"], "entries")
        if attrs["entries"].det().is_zero():
            raise serializers.ValidationError({"entries": "matrix is singular over K"})
        return attrs

    def create(self, validated_data):
        return validated_data["entries"]


# -------------------- Generalized isomorphisms --------------------

class BfMorphismSerializer(serializers.Serializer):
    n = serializers.IntegerField(min_value=0)
    rank = serializers.IntegerField(source="r", min_value=0)
    mu = RatFunField(source="section")
    fwd = MatrixField()
    bwd = MatrixField()

    def validate(self, attrs):
        _check_square(attrs["fwd"], attrs["n"], "fwd")
        _check_square(attrs["bwd"], attrs["n"], "bwd")
        return attrs


class GenIsoSerializer(serializers.Serializer):
    """{"n": int, "gs": [bf], "hs": [bf], "iso": [[string]], "base": "dvr" | "field"}."""

    n = serializers.IntegerField(min_value=0)
    gs = BfMorphismSerializer(many=True)
    hs = BfMorphismSerializer(many=True)
    iso = MatrixField()
    base = BaseField(default=DVR)

    def validate(self, attrs):
        n = attrs["n"]
        for side in ("gs", "hs"):
            if len(attrs[side]) != n:
                raise serializers.ValidationError({side: f"expected {n} steps, got {len(attrs[side])}"})
            for k, step in enumerate(attrs[side]):
                if step["n"] != n:
                    raise serializers.ValidationError({side: f"step {k} has rank {step['n']}, expected {n}"})
        _check_square(attrs["iso"], n, "iso")
        if attrs["base"].is_field:
            matrices = [attrs["iso"]] + [step[key] for side in ("gs", "hs") for step in attrs[side] for key in ("fwd", "bwd")]
            sections = [step["section"] for side in ("gs", "hs") for step in attrs[side]]
            if not all(m.is_constant() for m in matrices) or not all(s.is_constant() for s in sections):
                raise serializers.ValidationError({"base": "a field point needs constant entries"})
        return attrs

    def create(self, validated_data):
        base = validated_data["base"]

        def step(data, name):
            return BfMorphism(
                n=data["n"],
                r=data["r"],
                mu=LineWithSection(section=data["section"], name=name),
                fwd=data["fwd"],
                bwd=data["bwd"],
                base=base,
            )

        return GenIso(
            n=validated_data["n"],
            gs=tuple(step(g, mu_name(i)) for i, g in enumerate(validated_data["gs"])),
            hs=tuple(step(h, lambda_name(i)) for i, h in enumerate(validated_data["hs"])),
            iso=validated_data["iso"],
            base=base,
        )


# -------------------- Decomposition requests --------------------

class DecomposeRequestSerializer(serializers.Serializer):
    """
    Either a serialized point ("geniso") or a matrix ("n", "entries"),
    with an optional declared stratum ("I", "J").
    """

    geniso = GenIsoSerializer(required=False)
    n = serializers.IntegerField(min_value=1, required=False)
    entries = MatrixField(required=False)
    I = serializers.ListField(child=serializers.IntegerField(min_value=0), required=False)
    J = serializers.ListField(child=serializers.IntegerField(min_value=0), required=False)

    def validate(self, attrs):
        has_point = "geniso" in attrs
        has_matrix = "entries" in attrs
        if has_point == has_matrix:
            raise serializers.ValidationError("give exactly one of 'geniso' or 'entries'")
        if has_matrix:
            matrix = MatrixInputSerializer(data=self.initial_data)
            matrix.is_valid(raise_exception=True)
        return attrs

    def create(self, validated_data):
        if "geniso" in validated_data:
            point = GenIsoSerializer().create(validated_data["geniso"])
        else:
            point = from_matrix(validated_data["entries"])
        return point, validated_data.get("I"), validated_data.get("J")
