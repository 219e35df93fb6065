// Minimal virtual-node layer. Views build plain VNode trees, which keeps
// them testable in Node; only `apply` below ever touches the real DOM.

export type EventHandler = (ev: Event) => void;

export interface VElement {
  tag: string;
  attrs: Record<string, string | number | boolean>;
  on: Record<string, EventHandler>;
  children: VNode[];
}

export type VNode = VElement | string;

type AttrsInput = Record<string, string | number | boolean | EventHandler | null | undefined>;

/**
 * Build a virtual element. Attribute keys starting with "on" are taken
 * as event handlers ("onclick" listens for "click"); null/undefined and
 * `false` values drop the attribute entirely.
 */
export function h(tag: string, attrs: AttrsInput = {}, ...children: (VNode | VNode[] | null)[]): VElement {
  const plain: Record<string, string | number | boolean> = {};
  const on: Record<string, EventHandler> = {};
  for (const [key, value] of Object.entries(attrs)) {
    if (value === null || value === undefined || value === false) continue;
    if (key.startsWith("on") && typeof value === "function") {
      on[key.slice(2)] = value;
    } else if (typeof value !== "function") {
      plain[key] = value;
    }
  }
  const flat: VNode[] = [];
  for (const child of children) {
    if (child === null) continue;
    if (Array.isArray(child)) flat.push(...child);
    else flat.push(child);
  }
  return { tag, attrs: plain, on, children: flat };
}

export function isElement(node: VNode): node is VElement {
  return typeof node !== "string";
}

/** Depth-first list of all elements matching the predicate, document order. */
export function findAll(root: VNode, match: (el: VElement) => boolean): VElement[] {
  const found: VElement[] = [];
  const walk = (node: VNode): void => {
    if (!isElement(node)) return;
    if (match(node)) found.push(node);
    node.children.forEach(walk);
  };
  walk(root);
  return found;
}

export function findFirst(root: VNode, match: (el: VElement) => boolean): VElement | null {
  return findAll(root, match)[0] ?? null;
}

/** Concatenated text content of a subtree. */
export function textOf(node: VNode): string {
  if (!isElement(node)) return node;
  return node.children.map(textOf).join("");
}

// Attributes that must also be set as properties so form controls pick
// them up even after the browser has internal state for the element.
const PROPERTY_ATTRS = new Set(["checked", "disabled", "value", "open"]);

function build(doc: Document, node: VNode): Node {
  if (!isElement(node)) {
    return doc.createTextNode(node);
  }
  const el = doc.createElement(node.tag);
  for (const [key, value] of Object.entries(node.attrs)) {
    if (value === true) el.setAttribute(key, "");
    else el.setAttribute(key, String(value));
    if (PROPERTY_ATTRS.has(key)) {
      (el as unknown as Record<string, unknown>)[key] = value;
    }
  }
  for (const [event, handler] of Object.entries(node.on)) {
    el.addEventListener(event, handler);
  }
  for (const child of node.children) {
    el.appendChild(build(doc, child));
  }
  return el;
}

/** Replace the container's contents with a fresh rendering of the tree. */
export function apply(container: Element, node: VNode): void {
  const doc = container.ownerDocument;
  container.replaceChildren(build(doc, node));
}
