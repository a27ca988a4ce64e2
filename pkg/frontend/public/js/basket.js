// Ordered set of selected concepts. Insertion order is preserved, adds of
// an id already present are ignored, and the contents survive reloads via
// session storage. Deep links carry the same ids in the route's "sel"
// parameter; on load the URL wins and storage fills in names it remembers.
const STORAGE_KEY = "litgraph.basket";
export class SelectionBasket {
    storage;
    entries = [];
    listeners = [];
    constructor(storage = null) {
        this.storage = storage;
    }
    static restore(storage, urlIds) {
        const basket = new SelectionBasket(storage);
        const remembered = new Map();
        if (storage) {
            try {
                const raw = storage.getItem(STORAGE_KEY);
                if (raw) {
                    for (const entry of JSON.parse(raw)) {
                        remembered.set(entry.id, entry);
                    }
                }
            }
            catch {
                // corrupt storage: start empty
            }
        }
        if (urlIds.length > 0) {
            for (const id of urlIds) {
                const entry = remembered.get(id) ?? { id, name: id, category: null };
                basket.add(entry);
            }
        }
        else {
            for (const entry of remembered.values()) {
                basket.add(entry);
            }
        }
        return basket;
    }
    subscribe(listener) {
        this.listeners.push(listener);
        return () => {
            this.listeners = this.listeners.filter((l) => l !== listener);
        };
    }
    list() {
        return this.entries.slice();
    }
    ids() {
        return this.entries.map((e) => e.id);
    }
    has(id) {
        return this.entries.some((e) => e.id === id);
    }
    size() {
        return this.entries.length;
    }
    add(entry) {
        if (this.has(entry.id))
            return false;
        this.entries.push(entry);
        this.changed();
        return true;
    }
    remove(id) {
        const before = this.entries.length;
        this.entries = this.entries.filter((e) => e.id !== id);
        if (this.entries.length === before)
            return false;
        this.changed();
        return true;
    }
    clear() {
        if (this.entries.length === 0)
            return;
        this.entries = [];
        this.changed();
    }
    changed() {
        if (this.storage) {
            try {
                this.storage.setItem(STORAGE_KEY, JSON.stringify(this.entries));
            }
            catch {
                // storage full or unavailable: the in-memory basket still works
            }
        }
        for (const listener of this.listeners.slice())
            listener();
    }
}
export function encodeBasketParam(ids) {
    return ids.map(encodeURIComponent).join(",");
}
export function decodeBasketParam(value) {
    if (!value)
        return [];
    return value
        .split(",")
        .map((part) => decodeURIComponent(part))
        .filter((id) => id.length > 0);
}
//# sourceMappingURL=basket.js.map