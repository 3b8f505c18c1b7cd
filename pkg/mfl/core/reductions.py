from .instance import Instance, OsmcInstance


def element_client_id(element: int) -> str:
    return f"e{element}"


def osmc_to_onmfl(osmc: OsmcInstance) -> tuple[Instance, dict[int, str]]:
    """
    Online set k-multicover as multi-facility location: every subset becomes
    a facility opened at the subset cost, every element a client with free
    connections to the subsets containing it and no edge to the others.

    Returns the instance (arrival order follows the element arrivals) and the
    element -> client id mapping.
    """
    clients = {element_client_id(e): {} for e in range(osmc.universe_size)}
    for subset in osmc.subsets:
        for e in sorted(subset.members):
            clients[element_client_id(e)][subset.id] = 0.0

    mapping = {e: element_client_id(e) for e in range(osmc.universe_size)}
    inst = Instance.build(
        facilities=[(subset.id, subset.cost) for subset in osmc.subsets],
        clients=clients,
        k=osmc.k,
        metric=False,
        arrival_order=[mapping[e] for e in osmc.arrivals],
    )
    return inst, mapping
