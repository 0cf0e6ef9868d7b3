import io

from rest_framework import serializers
from rest_framework.parsers import JSONParser
from rest_framework.renderers import JSONRenderer

from .geometry import Point
from .instances import Solution, Waypoint
from .models import RunRecord

# float noise allowed between a route's recomputed cost and its budget
BUDGET_TOL = 1e-9
MAX_SEED = 2**64 - 1


class WaypointSerializer(serializers.Serializer):
    zone_id = serializers.IntegerField()
    circle_ids = serializers.ListField(child=serializers.IntegerField(min_value=1))
    x = serializers.FloatField()
    y = serializers.FloatField()


class SolutionSerializer(serializers.Serializer):
    """Solution file: one route with its totals"""

    instance_name = serializers.CharField(allow_blank=True, trim_whitespace=False)
    algorithm = serializers.CharField()
    seed = serializers.IntegerField(min_value=0, max_value=MAX_SEED)
    prize = serializers.FloatField(min_value=0)
    cost = serializers.FloatField(min_value=0)
    budget = serializers.FloatField()
    runtime_s = serializers.FloatField(min_value=0)
    truncated = serializers.BooleanField(default=False)
    sequence = WaypointSerializer(many=True)

    def validate_sequence(self, value):
        """Each zone may be visited once"""
        zones = [w["zone_id"] for w in value]
        if len(set(zones)) != len(zones):
            raise serializers.ValidationError("A zone appears more than once in the sequence.")
        return value

    def validate(self, data):
        if data["cost"] > data["budget"] + BUDGET_TOL:
            raise serializers.ValidationError({"cost": "Route cost exceeds the budget."})
        return data

    def create(self, validated_data):
        sequence = tuple(
            Waypoint(
                zone_id=w["zone_id"],
                circle_ids=tuple(w["circle_ids"]),
                point=Point(w["x"], w["y"]),
            )
            for w in validated_data.pop("sequence")
        )
        return Solution(sequence=sequence, **validated_data)


class ZoneSerializer(serializers.Serializer):
    id = serializers.IntegerField()
    circle_ids = serializers.ListField(source="member_ids", child=serializers.IntegerField())
    vertices = serializers.SerializerMethodField()
    center = serializers.SerializerMethodField()
    prize = serializers.FloatField()

    def get_vertices(self, obj):
        return [v.as_list() for v in obj.vertices]

    def get_center(self, obj):
        return obj.center.as_list()


class LayoutSerializer(serializers.Serializer):
    """Read-only view of a Steiner zone layout"""

    zones = ZoneSerializer(many=True)
    seed = serializers.IntegerField()
    iterations = serializers.IntegerField(source="iterations_used")


class RunRecordSerializer(serializers.ModelSerializer):
    seed = serializers.IntegerField()

    class Meta:
        model = RunRecord
        fields = [
            "id",
            "batch",
            "instance",
            "algorithm",
            "seed",
            "budget",
            "prize",
            "cost",
            "runtime_s",
            "status",
            "error",
        ]
        read_only_fields = ["id"]


def render_json(data):
    return JSONRenderer().render(data, renderer_context={"indent": 2}).decode("utf-8") + "\n"


def serialize_solution(solution):
    return render_json(SolutionSerializer(solution).data)


def parse_solution(text):
    data = JSONParser().parse(io.BytesIO(text.encode("utf-8")))
    serializer = SolutionSerializer(data=data)
    serializer.is_valid(raise_exception=True)
    return serializer.save()


def serialize_layout(layout):
    return render_json(LayoutSerializer(layout).data)
